//! Components that fold their own projected history.
//!
//! The inout system drives two copies of a worker component through
//! projections u_1 and u_2. A projection slot is itself a little state
//! tuple: frozen on events that do not concern it, advanced by one
//! translated component event otherwise. This example replays a trace in
//! debug mode (which records the projected raw trace), shows the worker
//! state carried inside u_1 after every step, and certifies that the slot
//! equals the worker model folded over exactly that projected trace.

use svtl::temporal::CheckMode;
use svtl::{check_property, eval_component_var, load_file, Event, Trace, Value};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/inout.svl");
    let model = load_file(path).expect("model loads");

    println!("== properties ==");
    for (name, prop) in model.properties() {
        let v = check_property(&model, prop, CheckMode::Exact).expect("check runs");
        match v.bound {
            Some(b) => println!("{name}: {:?} within {b} steps", v.outcome),
            None => println!("{name}: {:?}", v.outcome),
        }
    }

    // Six rounds of strict alternation: enough for both workers to reach io.
    let trace: Trace = (0..12)
        .map(|i| Event::new("sched", vec![Value::int(1 + i % 2)]))
        .collect();

    println!();
    println!("== what u_1 sees ==");
    let run = model.run_trace_debug(&trace);
    assert!(run.error.is_none(), "trace must replay");
    let u1 = model.slot_index("u_1").expect("projection slot");
    println!("{:<12} wcount  INOUT  projected trace so far", "event");
    for (i, s) in run.states.iter().enumerate() {
        let cause = if i == 0 {
            "start".to_string()
        } else {
            trace.0[i - 1].to_string()
        };
        let comp = s.0[u1].as_comp().expect("projection slot holds a component");
        let raw = comp.raw_trace.as_ref().expect("debug runs record raw traces");
        let seen: Vec<String> = raw.iter().map(|e| e.to_string()).collect();
        println!(
            "{cause:<12} {:<7} {:<6} {}",
            comp.values[0].to_string(),
            comp.values[1].to_string(),
            seen.join(" ")
        );
    }

    println!();
    println!("== the composite is the component fold ==");
    let worker = model.component("worker").expect("declared");
    let last = run.states.last().expect("nonempty");
    let comp = last.0[u1].as_comp().expect("component value");
    let raw = Trace(comp.raw_trace.clone().expect("recorded"));
    let folded = worker.run_trace(&raw);
    assert!(folded.error.is_none(), "projected trace replays on the worker");
    assert_eq!(
        &folded.states.last().expect("nonempty").0,
        &comp.values,
        "slot state equals the worker folded over the projected trace"
    );
    println!("u_1 after {} events = worker after {} projected events", trace.0.len(), raw.0.len());

    let wc = eval_component_var(&model, last, "u_1", "wcount").expect("exported");
    let io = eval_component_var(&model, last, "u_1", "INOUT").expect("exported");
    println!("wcount(u_1) = {wc}, INOUT(u_1) = {io}");
}
