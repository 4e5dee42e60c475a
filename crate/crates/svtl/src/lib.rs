//! State-variable models over finite event traces.
//!
//! A model declares state variables defined by recursion over events: each
//! variable has an initial value and per-event update clauses that may read
//! the pre-event state, the post-event values of earlier variables, the
//! event itself, and its measure. Definedness guards decide which events are
//! accepted in a given state, so traces live in a prefix-closed set and the
//! reachable states form a graph with possible dead ends.
//!
//! On top of the kernel sit:
//!
//! - [`explorer`]: breadth-first state-space exploration with stable node
//!   ids, plus DOT export and path/lasso extraction;
//! - [`temporal`]: definedness-aware temporal operators (`next`, `always`,
//!   `globally`, `within`, `eventually`, bound checks) evaluated
//!   three-valued over possibly truncated graphs, with replayable failure
//!   witnesses;
//! - [`composition`]: projection of component models into system state,
//!   with freeze guards, event emission, and send/receive rendezvous
//!   matching;
//! - [`speclang`]: the `.svl` modeling language (parser, static checks,
//!   canonical pretty-printer);
//! - [`cli`]: the `svtl` command-line entry points (`run`, `check`,
//!   `explore`, `bound`).
//!
//! The examples directory is the guided tour; each one runs standalone:
//!
//! ```text
//! cargo run --example monitor_trace      # replay a trace, watch variables
//! cargo run --example explore_graph      # enumerate states, export DOT
//! cargo run --example check_liveness     # eventually/always with witnesses
//! cargo run --example waiting_bounds     # suprema and bound properties
//! cargo run --example execution_quantum  # a preemption budget, found tight
//! cargo run --example compose_inout      # projecting a component model
//! cargo run --example rendezvous_pair    # send/receive matching
//! cargo run --example inline_model       # build a model from a string
//! ```

pub mod cli;
pub mod composition;
pub mod explorer;
pub mod kernel;
pub mod speclang;
pub mod temporal;

pub use composition::{eval_component_var, project_step, rendezvous_step, EmitClause, Projection, RendezvousSpec};
pub use explorer::{explore, export_dot, ExploreLimits, LassoShape, TransitionGraph, Witness};
pub use kernel::{
    parse_trace, Event, Model, Rational, StateTuple, StepError, Trace, TraceError, TraceRun, Value,
};
pub use speclang::{load_file, load_str, parse, pretty_print, Diagnostic, LoadError};
pub use temporal::{
    check_always, check_eventually, check_globally, check_next, check_on_graph,
    check_possible_next, check_property, check_within, sup_value, CheckMode, Outcome, Property,
    SupOutcome, Verdict,
};
