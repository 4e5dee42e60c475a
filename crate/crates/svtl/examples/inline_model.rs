//! Building a model from a string, no files involved.
//!
//! A shuttle lift on three floors: it climbs to the top, turns around,
//! descends to the bottom, turns around again. The example loads the text
//! with load_str, explores the full reachable graph, checks that the top
//! floor is always reached and the cab never leaves the shaft, and prints
//! the canonical form that the parser and printer agree on.

use svtl::temporal::{CheckMode, Outcome};
use svtl::{check_property, explore, load_str, parse, pretty_print, ExploreLimits};

const LIFT: &str = "
; A cab shuttling over floors 0, 1, 2.
alphabet {
  (up)
  (down)
}

var floor : rat init 0 {
  on (up) -> floor + 1
  on (down) -> floor - 1
  otherwise -> floor
}

var climbing : bool init true {
  on (up) when floor = 1 -> false
  on (down) when floor = 1 -> true
  otherwise -> climbing
}

var arrived : bool init false {
  on (up) when floor = 1 -> true
  otherwise -> false
}

guard (up) when climbing and floor < 2
guard (down) when not climbing and floor > 0

property reaches_top = eventually arrived
property stays_on_shaft = globally (floor >= 0 and floor <= 2)
";

fn main() {
    let model = load_str(LIFT).expect("model loads");

    println!("== reachable states ==");
    let graph = explore(&model, ExploreLimits::default()).expect("exploration runs");
    for id in 0..graph.len() {
        println!("node {id}: {}", model.format_state(graph.node(id), None));
    }
    println!("complete: {}", graph.complete());

    println!();
    println!("== checks ==");
    for (name, prop) in model.properties() {
        let v = check_property(&model, prop, CheckMode::Exact).expect("check runs");
        assert_eq!(v.outcome, Outcome::Holds);
        match v.bound {
            Some(b) => println!("{name}: {:?} within {b} steps", v.outcome),
            None => println!("{name}: {:?}", v.outcome),
        }
    }

    println!();
    println!("== canonical form ==");
    let printed = pretty_print(&parse(LIFT).expect("parses"));
    print!("{printed}");
    let again = pretty_print(&parse(&printed).expect("its own output parses"));
    assert_eq!(printed, again, "printing is a fixpoint");
}
