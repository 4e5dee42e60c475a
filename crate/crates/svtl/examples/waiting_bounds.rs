//! Suprema of waiting accumulators, and what truncation does to them.
//!
//! On the three-process round robin, every waiting accumulator tops out
//! at exactly 2, so `bounded L_p` holds and the strict comparisons
//! bracket the supremum. On the free scheduler the accumulator is
//! genuinely unbounded; a capped exploration cannot know that, and the
//! verdict honestly says so instead of guessing.

use svtl::kernel::rat_int;
use svtl::temporal::{check_on_graph, Property, SupOutcome};
use svtl::{explore, load_file, sup_value, ExploreLimits};

fn main() {
    let base = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

    println!("== three-process round robin ==");
    let m3 = load_file(format!("{base}/scheduler_rr_n3.svl")).expect("model loads");
    let graph = explore(&m3, ExploreLimits::default()).expect("every step defined");
    for p in 1..=3 {
        let slot = m3.slot_index(&format!("L_{p}")).expect("declared");
        match sup_value(&m3, &graph, slot).expect("sup computes") {
            SupOutcome::Finite { value, node } => {
                println!("L_{p}: supremum {} attained at node {node}", value)
            }
            other => println!("L_{p}: {other:?}"),
        }
        for k in [3, 2] {
            let v = check_on_graph(&m3, &graph, &Property::BoundCompare(slot, rat_int(k)))
                .expect("check runs");
            println!("  always L_{p} < {k}: {:?}", v.outcome);
        }
    }

    println!();
    println!("== free scheduler, capped at 2000 states ==");
    let free = load_file(format!("{base}/scheduler_free.svl")).expect("model loads");
    let graph = explore(&free, ExploreLimits::default().with_max_states(2000))
        .expect("every step defined");
    println!("complete: {}", graph.complete());
    let slot = free.slot_index("L_1").expect("declared");
    match sup_value(&free, &graph, slot).expect("sup computes") {
        SupOutcome::Unknown {
            explored_max: Some((value, node)),
            frontier_depth: Some(depth),
        } => {
            println!("L_1: unknown; saw {value} at node {node}, frontier at depth {depth}");
        }
        other => println!("L_1: {other:?}"),
    }
    let v = check_on_graph(&free, &graph, free.property("wait_1").expect("declared"))
        .expect("check runs");
    println!("bounded L_1: {:?}", v.outcome);
}
