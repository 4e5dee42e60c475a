//! A preemption budget, found to be exactly three.
//!
//! The quantum scheduler lets a process keep running until it has used
//! three consecutive steps, then forces a hand-over. The property
//! 'whoever is running keeps running unless their usage exceeds k' holds
//! for k = 2 and fails for k = 4, and the counterexample for k = 4 shows
//! the hand-over happening at usage exactly 3.

use svtl::temporal::{CheckMode, Outcome};
use svtl::{check_property, load_file};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/scheduler_quantum.svl");
    let model = load_file(path).expect("model loads");

    for (name, prop) in model.properties() {
        let v = check_property(&model, prop, CheckMode::Exact).expect("check runs");
        println!("{name}: {:?}", v.outcome);
    }

    println!();
    println!("== the counterexample for the loose bound ==");
    let v = check_property(
        &model,
        model.property("quantum_4_1").expect("declared"),
        CheckMode::Exact,
    )
    .expect("check runs");
    assert_eq!(v.outcome, Outcome::Fails);
    let witness = v.witness.expect("failures carry a witness");
    let run = model.run_trace(&witness.trace);
    assert!(run.error.is_none(), "witness must replay");

    let cols: Vec<usize> = ["X_1", "D_1", "X_2", "D_2"]
        .iter()
        .map(|n| model.slot_index(n).expect("declared"))
        .collect();
    println!("{:<12} X_1   D_1  X_2   D_2", "event");
    for (i, s) in run.states.iter().enumerate() {
        let cause = if i == 0 {
            "start".to_string()
        } else {
            witness.trace.0[i - 1].to_string()
        };
        println!(
            "{cause:<12} {:<5} {:<4} {:<5} {:<4}",
            s.0[cols[0]].to_string(),
            s.0[cols[1]].to_string(),
            s.0[cols[2]].to_string(),
            s.0[cols[3]].to_string()
        );
    }
    println!("process 1 is preempted exactly when D_1 reaches 3.");
}
