//! Models and the single-step / fold evaluation semantics.
//!
//! A model is a finite event alphabet, a list of state variables defined by
//! per-event update clauses, definedness guards that make the transition
//! function partial, a measure assigning each event a nonnegative rational,
//! and optionally component bindings (projections) and named properties.
//!
//! Every state variable is a function of the trace alone: the value after
//! `trace + event` is computed from the value after `trace` plus the event.
//! Updates run in declaration order; a clause may read post-event values of
//! variables declared earlier (the primed form), so chained definitions like
//! an accumulator guarded on this step's readiness flags are expressible
//! without circularity.

use std::fmt::Write as _;

use thiserror::Error;

use crate::composition::{self, Projection, RendezvousSpec};
use crate::temporal::Property;

use super::event::{Event, Trace};
use super::expr::{eval, eval_bool, EvalCtx, EvalError, EventPattern, Expr};
use super::value::{ComponentState, Rational, Sort, Value};

/// One update clause: `guard -> value`.
#[derive(Debug, Clone)]
pub struct UpdateClause {
    pub guard: ClauseGuard,
    pub value: Expr,
}

/// Clause guard: either an event pattern (with optional refinement) or a
/// boolean expression. First matching clause wins; the mandatory `otherwise`
/// arm catches the rest.
#[derive(Debug, Clone)]
pub enum ClauseGuard {
    Event {
        pattern: EventPattern,
        when: Option<Expr>,
    },
    Expr(Expr),
}

/// A state variable definition.
#[derive(Debug, Clone)]
pub struct VarDef {
    pub name: String,
    pub sort: Sort,
    pub init: Value,
    pub clauses: Vec<UpdateClause>,
    pub otherwise: Expr,
}

/// A definedness guard: events matching `pattern` are defined exactly when
/// `when` holds (no `when` means always).
#[derive(Debug, Clone)]
pub struct GuardDef {
    pub pattern: EventPattern,
    pub when: Option<Expr>,
}

/// The event measure: first-match clauses plus an optional default.
#[derive(Debug, Clone, Default)]
pub struct MeasureDef {
    pub clauses: Vec<(EventPattern, Rational)>,
    pub default: Option<Rational>,
}

/// An event head signature: head token plus the domain of each argument.
#[derive(Debug, Clone)]
pub struct HeadSig {
    pub head: String,
    pub arg_domains: Vec<usize>,
}

/// A named finite argument domain.
#[derive(Debug, Clone)]
pub struct Domain {
    pub name: String,
    pub elems: Vec<Value>,
}

/// A complete model. Constructed by the surface language's static checker;
/// the stepping code assumes the checker's guarantees (resolved slots,
/// sort-correct expressions, ordered post-references).
#[derive(Debug, Clone, Default)]
pub struct Model {
    pub(crate) domains: Vec<Domain>,
    pub(crate) heads: Vec<HeadSig>,
    /// The full enumerated alphabet, sorted lexicographically.
    pub(crate) alphabet: Vec<Event>,
    pub(crate) vars: Vec<VarDef>,
    /// Empty means every alphabet event is defined everywhere.
    pub(crate) guards: Vec<GuardDef>,
    pub(crate) measure: MeasureDef,
    pub(crate) components: Vec<(String, Model)>,
    pub(crate) projections: Vec<Projection>,
    pub(crate) rendezvous: Option<RendezvousSpec>,
    pub(crate) properties: Vec<(String, Property)>,
    /// For component models: indices of exported variables.
    pub(crate) exports: Vec<usize>,
}

/// A state: one value per tuple slot (declared variables first, then one
/// component-state slot per projection).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateTuple(pub Vec<Value>);

/// Failure applying one event.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum StepError {
    #[error("undefined transition on {event}")]
    UndefinedTransition { event: Event },
    #[error("projection {projection}: no emit clause matches {event}")]
    NoEmission { projection: String, event: Event },
    #[error("projection {projection}: component {component} has no transition on {event}")]
    UndefinedComponentTransition {
        projection: String,
        component: String,
        event: Event,
    },
    #[error("projection {projection}: emitted {event} is outside component {component}'s alphabet")]
    InvalidComponentEvent {
        projection: String,
        component: String,
        event: Event,
    },
    #[error("rendezvous violation: {detail}")]
    RendezvousViolation { detail: String },
    #[error("no measure clause matches {event}")]
    MeasureUndefined { event: Event },
    #[error("evaluation: {0}")]
    Eval(#[from] EvalError),
}

/// A step failure at a known position in a trace. Positions are 1-based
/// event indices; `position` events minus one were consumed successfully.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("event {position}: {source}")]
pub struct TraceError {
    pub position: usize,
    pub source: StepError,
}

/// Result of folding a whole trace: the state after every prefix, in order,
/// plus the error that stopped the fold early (if any). `states[0]` is the
/// initial state, so a clean run over n events yields n + 1 states.
#[derive(Debug, Clone)]
pub struct TraceRun {
    pub states: Vec<StateTuple>,
    pub error: Option<TraceError>,
}

impl Model {
    /// Number of tuple slots: declared variables plus projections.
    pub fn num_slots(&self) -> usize {
        self.vars.len() + self.projections.len()
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    /// Name of tuple slot `i`.
    pub fn slot_name(&self, i: usize) -> &str {
        if i < self.vars.len() {
            &self.vars[i].name
        } else {
            &self.projections[i - self.vars.len()].name
        }
    }

    /// Slot index for a variable or projection name.
    pub fn slot_index(&self, name: &str) -> Option<usize> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .or_else(|| {
                self.projections
                    .iter()
                    .position(|p| p.name == name)
                    .map(|i| i + self.vars.len())
            })
    }

    pub fn var_sort(&self, slot: usize) -> Sort {
        if slot < self.vars.len() {
            self.vars[slot].sort
        } else {
            Sort::Component
        }
    }

    /// The enumerated alphabet in lexicographic order.
    pub fn alphabet(&self) -> &[Event] {
        &self.alphabet
    }

    pub fn component(&self, name: &str) -> Option<&Model> {
        self.components
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
    }

    pub fn projection(&self, name: &str) -> Option<&Projection> {
        self.projections.iter().find(|p| p.name == name)
    }

    pub(crate) fn projection_component(&self, p: &Projection) -> &Model {
        &self.components[p.component].1
    }

    pub fn properties(&self) -> impl Iterator<Item = (&str, &Property)> {
        self.properties.iter().map(|(n, p)| (n.as_str(), p))
    }

    pub fn property(&self, name: &str) -> Option<&Property> {
        self.properties
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
    }

    /// The state after the empty trace.
    pub fn init_state(&self) -> StateTuple {
        self.init_inner(false)
    }

    /// Like [`Model::init_state`] but component slots record their raw event
    /// sequences as they advance (debug mode). Recording does not affect
    /// state identity.
    pub fn init_state_debug(&self) -> StateTuple {
        self.init_inner(true)
    }

    fn init_inner(&self, record: bool) -> StateTuple {
        let mut values: Vec<Value> = self.vars.iter().map(|v| v.init.clone()).collect();
        for p in &self.projections {
            let comp = self.projection_component(p);
            let inits: Vec<Value> = comp.vars.iter().map(|v| v.init.clone()).collect();
            values.push(Value::Comp(Box::new(ComponentState::new(inits, record))));
        }
        StateTuple(values)
    }

    /// Measure of an event, per first-match clause then default. A model
    /// with no measure forms at all measures every event as 1.
    pub fn measure_of(&self, e: &Event) -> Result<Rational, StepError> {
        for (pat, q) in &self.measure.clauses {
            if pat.matches(e) {
                return Ok(q.clone());
            }
        }
        if let Some(q) = &self.measure.default {
            return Ok(q.clone());
        }
        if self.measure.clauses.is_empty() {
            return Ok(Rational::from_integer(1.into()));
        }
        Err(StepError::MeasureUndefined { event: e.clone() })
    }

    /// Whether `e` is part of the declared alphabet (head arity and argument
    /// domains included).
    pub fn event_declared(&self, e: &Event) -> bool {
        self.heads.iter().any(|h| {
            h.head == e.head
                && h.arg_domains.len() == e.args.len()
                && h.arg_domains
                    .iter()
                    .zip(&e.args)
                    .all(|(d, a)| self.domains[*d].elems.contains(a))
        })
    }

    /// Whether the transition on `e` is defined at `s`.
    pub fn is_defined(&self, s: &StateTuple, e: &Event) -> Result<bool, StepError> {
        if !self.event_declared(e) {
            return Ok(false);
        }
        if self.guards.is_empty() {
            return Ok(true);
        }
        let m = self.measure_of(e)?;
        let ctx = EvalCtx {
            pre: &s.0,
            post: None,
            event: Some(e),
            measure: Some(&m),
        };
        for g in &self.guards {
            if g.pattern.matches(e) {
                return match &g.when {
                    Some(w) => Ok(eval_bool(w, &ctx)?),
                    None => Ok(true),
                };
            }
        }
        Ok(false)
    }

    /// Exactly the alphabet events whose guard holds at `s`, in lexicographic
    /// order. An empty result is a dead end.
    pub fn defined_events(&self, s: &StateTuple) -> Result<Vec<Event>, StepError> {
        let mut out = Vec::new();
        for e in &self.alphabet {
            if self.is_defined(s, e)? {
                out.push(e.clone());
            }
        }
        Ok(out)
    }

    /// Apply one event. Errors with `UndefinedTransition` if the guard does
    /// not hold at `s`.
    pub fn step(&self, s: &StateTuple, e: &Event) -> Result<StateTuple, StepError> {
        if !self.is_defined(s, e)? {
            return Err(StepError::UndefinedTransition { event: e.clone() });
        }
        self.step_unchecked(s, e)
    }

    /// Apply one event without re-checking the guard. Used by the explorer,
    /// which enumerates defined events first.
    pub(crate) fn step_unchecked(
        &self,
        s: &StateTuple,
        e: &Event,
    ) -> Result<StateTuple, StepError> {
        let m = self.measure_of(e)?;
        let mut post: Vec<Value> = Vec::with_capacity(self.num_slots());
        for v in &self.vars {
            let val = {
                let ctx = EvalCtx {
                    pre: &s.0,
                    post: Some(&post),
                    event: Some(e),
                    measure: Some(&m),
                };
                eval_update(v, &ctx)?
            };
            if val.sort() != v.sort {
                return Err(StepError::Eval(EvalError::SortMismatch {
                    expected: v.sort,
                    found: val.sort(),
                }));
            }
            post.push(val);
        }
        composition::advance_projections(self, s, &mut post, e, &m)?;
        Ok(StateTuple(post))
    }

    /// Value of variable `name` after folding the whole trace from the
    /// initial state.
    pub fn eval_var(&self, name: &str, trace: &Trace) -> Result<Value, TraceError> {
        let slot = self.slot_index(name).unwrap_or_else(|| {
            panic!("eval_var: unknown variable {name:?}");
        });
        let mut s = self.init_state();
        for (i, e) in trace.iter().enumerate() {
            s = self.step(&s, e).map_err(|source| TraceError {
                position: i + 1,
                source,
            })?;
        }
        Ok(s.0[slot].clone())
    }

    /// Fold a trace from the initial state, keeping the state after every
    /// prefix. On an undefined transition the fold stops and the partial
    /// prefix states are returned alongside the positioned error.
    pub fn run_trace(&self, trace: &Trace) -> TraceRun {
        self.run_from(self.init_state(), trace)
    }

    /// Debug-mode variant: component slots record raw event sequences.
    pub fn run_trace_debug(&self, trace: &Trace) -> TraceRun {
        self.run_from(self.init_state_debug(), trace)
    }

    fn run_from(&self, init: StateTuple, trace: &Trace) -> TraceRun {
        let mut states = vec![init];
        for (i, e) in trace.iter().enumerate() {
            match self.step(states.last().unwrap(), e) {
                Ok(next) => states.push(next),
                Err(source) => {
                    return TraceRun {
                        states,
                        error: Some(TraceError {
                            position: i + 1,
                            source,
                        }),
                    }
                }
            }
        }
        TraceRun {
            states,
            error: None,
        }
    }

    /// Render a state as `name=value` pairs in slot order, restricted to
    /// `selected` slots when given. Component slots render with their own
    /// variable names.
    pub fn format_state(&self, s: &StateTuple, selected: Option<&[usize]>) -> String {
        let mut out = String::new();
        let slots: Vec<usize> = match selected {
            Some(sel) => sel.to_vec(),
            None => (0..self.num_slots()).collect(),
        };
        for (k, i) in slots.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}={}", self.slot_name(*i), self.format_slot(s, *i));
        }
        out
    }

    pub(crate) fn format_slot(&self, s: &StateTuple, i: usize) -> String {
        match &s.0[i] {
            Value::Comp(c) if i >= self.vars.len() => {
                let p = &self.projections[i - self.vars.len()];
                let comp = self.projection_component(p);
                let mut out = String::from("{");
                for (j, v) in c.values.iter().enumerate() {
                    if j > 0 {
                        out.push(' ');
                    }
                    let _ = write!(out, "{}={}", comp.vars[j].name, v);
                }
                out.push('}');
                out
            }
            v => v.to_string(),
        }
    }
}

pub(crate) fn eval_update(v: &VarDef, ctx: &EvalCtx<'_>) -> Result<Value, EvalError> {
    for clause in &v.clauses {
        let fires = match &clause.guard {
            ClauseGuard::Event { pattern, when } => {
                let ev = ctx.event.ok_or(EvalError::EventUnavailable)?;
                if pattern.matches(ev) {
                    match when {
                        Some(w) => eval_bool(w, ctx)?,
                        None => true,
                    }
                } else {
                    false
                }
            }
            ClauseGuard::Expr(g) => eval_bool(g, ctx)?,
        };
        if fires {
            return eval(&clause.value, ctx);
        }
    }
    eval(&v.otherwise, ctx)
}
