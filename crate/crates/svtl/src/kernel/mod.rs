//! Core semantics: values, events, expressions, and model evaluation.
//!
//! The kernel knows nothing about concrete syntax or graphs. It answers three
//! questions: what is the initial state, which events are defined at a state,
//! and what state follows an event. Everything else (exploration, temporal
//! checks, the surface language) is built on those.

pub mod event;
pub mod expr;
pub mod model;
pub mod value;

pub use event::{parse_trace, Event, Trace, TraceParseError};
pub use expr::{CmpOp, EvalCtx, EvalError, EventPattern, Expr, PatArg};
pub use model::{
    ClauseGuard, Domain, GuardDef, HeadSig, MeasureDef, Model, StateTuple, StepError, TraceError,
    TraceRun, UpdateClause, VarDef,
};
pub use value::{fmt_rat, rat, rat_int, ComponentState, Rational, Sort, Value};
