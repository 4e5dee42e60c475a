//! Liveness with concrete bounds on the fair scheduler, and starvation
//! with a replayable lasso on the free one.
//!
//! `eventually` does not just say yes: when it holds, the verdict carries
//! the least step budget that suffices from the worst reachable state.
//! When it fails, the witness is a trace plus a cycle that can repeat
//! forever without the awaited state; replaying it through the kernel
//! proves the refutation is real.

use svtl::temporal::{check_on_graph, CheckMode, Outcome};
use svtl::{check_property, explore, load_file, ExploreLimits};

fn main() {
    let base = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

    println!("== round robin: everyone runs on schedule ==");
    let fair = load_file(format!("{base}/scheduler_rr.svl")).expect("model loads");
    for (name, prop) in fair.properties() {
        let v = check_property(&fair, prop, CheckMode::Exact).expect("check runs");
        match v.bound {
            Some(b) => println!("{name}: {:?} (within {b} steps)", v.outcome),
            None => println!("{name}: {:?}", v.outcome),
        }
    }

    println!();
    println!("== free scheduler: process 1 can starve ==");
    let free = load_file(format!("{base}/scheduler_free.svl")).expect("model loads");
    let graph = explore(&free, ExploreLimits::default().with_max_states(2000))
        .expect("every step defined");
    let verdict = check_on_graph(&free, &graph, free.property("live_1").expect("declared"))
        .expect("check runs");
    assert_eq!(verdict.outcome, Outcome::Fails);
    let witness = verdict.witness.expect("failures carry a witness");
    let lasso = witness.lasso.expect("starvation is a lasso");
    println!(
        "live_1 fails: {} stem event(s), then a {}-event cycle forever:",
        lasso.stem_len, lasso.cycle_len
    );
    for (i, e) in witness.trace.iter().enumerate() {
        let role = if i < lasso.stem_len { "stem " } else { "cycle" };
        println!("  {role} {e}");
    }

    let run = free.run_trace(&witness.trace);
    assert!(run.error.is_none(), "witness must replay");
    let entry = lasso.stem_len;
    let closes = run.states[entry] == run.states[entry + lasso.cycle_len];
    let x1 = free.slot_index("X_1").expect("X_1 exists");
    let never_scheduled = run.states[entry..]
        .iter()
        .all(|s| s.0[x1].as_bool() == Some(false));
    println!("cycle returns to its entry state: {closes}");
    println!("process 1 scheduled anywhere on it: {}", !never_scheduled);
}
