//! Replay a recorded trace against a model and watch variables move.
//!
//! The round-robin scheduler tracks, per process, whether it was just
//! scheduled (`X_p`) and how long it has been waiting (`L_p`). Replaying
//! ten alternating scheduling events shows the accumulators fill and
//! drain; an out-of-turn trace is rejected at the offending event.

use svtl::kernel::parse_trace;
use svtl::load_file;

fn main() {
    let base = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let model = load_file(format!("{base}/scheduler_rr.svl")).expect("model loads");
    let text =
        std::fs::read_to_string(format!("{base}/traces/rr_ten.trace")).expect("trace file reads");
    let trace = parse_trace(&text).expect("trace parses");

    println!("== replaying {} events ==", trace.len());
    let run = model.run_trace(&trace);
    for (i, state) in run.states.iter().enumerate() {
        let cause = if i == 0 {
            "start".to_string()
        } else {
            trace.0[i - 1].to_string()
        };
        println!("{cause:<12} {}", model.format_state(state, None));
    }
    if let Some(err) = run.error {
        println!("rejected: {err}");
    }

    println!();
    println!("== an out-of-turn trace ==");
    let bad = parse_trace("(sched 1)\n(sched 1)\n").expect("trace parses");
    let run = model.run_trace(&bad);
    println!(
        "replayed {} of {} events, then: {}",
        run.states.len() - 1,
        bad.len(),
        run.error
            .map(|e| e.to_string())
            .unwrap_or_else(|| "accepted".into())
    );
}
