//! Send and receive must pair up, or the step is refused.
//!
//! In the rendezvous fixture every (comm v) makes the left peer send v to
//! peer 2 while the right peer receives v from peer 1, so the step's sends
//! and receives match as (source, value, target) multisets. This example
//! explores the intact system, checks that the right peer mirrors the last
//! transmitted value, then breaks the left peer's emit table and shows the
//! engine rejecting the very first unmatched communication.

use std::fs;

use svtl::temporal::CheckMode;
use svtl::{check_property, explore, load_str, parse_trace, ExploreLimits, StepError};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/rendezvous.svl");
    let src = fs::read_to_string(path).expect("fixture is readable");
    let model = load_str(&src).expect("model loads");

    println!("== the intact system ==");
    let graph = explore(&model, ExploreLimits::default()).expect("exploration runs");
    println!(
        "nodes: {}, edges: {}, complete: {}",
        graph.len(),
        graph.num_edges(),
        graph.complete()
    );
    let v = check_property(
        &model,
        model.property("mirrored").expect("declared"),
        CheckMode::Exact,
    )
    .expect("check runs");
    println!("mirrored: {:?}", v.outcome);

    println!();
    println!("== a peer that stops sending ==");
    let broken = src.replace("(comm v) -> (send v 2)", "(comm v) -> (idle)");
    let model = load_str(&broken).expect("still a well-formed model");
    let trace = parse_trace("(compute)\n(comm 2)").expect("trace parses");
    let run = model.run_trace(&trace);
    println!("replayed {} of {} events", run.states.len() - 1, trace.0.len());
    let err = run.error.expect("the unmatched receive must be refused");
    println!("rejected: {err}");
    assert!(matches!(err.source, StepError::RendezvousViolation { .. }));
}
