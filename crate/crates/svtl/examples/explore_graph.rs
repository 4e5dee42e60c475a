//! Enumerate every reachable state of a model and export the graph.
//!
//! Exploration is breadth-first with hash-consed states, so node ids are
//! stable across runs. The DOT output at the end can be piped straight
//! into Graphviz: `cargo run --example explore_graph | tail -n +20 | dot -Tsvg`.

use svtl::explorer::{dump_text, export_dot};
use svtl::{explore, load_file, ExploreLimits};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/scheduler_rr_n3.svl");
    let model = load_file(path).expect("model loads");
    let graph = explore(&model, ExploreLimits::default()).expect("every step defined");

    println!("== summary ==");
    println!(
        "nodes: {}  edges: {}  complete: {}",
        graph.len(),
        graph.num_edges(),
        graph.complete()
    );

    println!();
    println!("== nodes and transitions ==");
    print!("{}", dump_text(&model, &graph, None));

    println!();
    println!("== DOT ==");
    print!("{}", export_dot(&model, &graph, None));
}
