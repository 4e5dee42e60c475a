//! Component composition: projection variables, emit rules, rendezvous.
//!
//! A projection binds a component model into the system: its slot holds the
//! component's state tuple, frozen on steps where the freeze guard holds and
//! advanced by exactly one emitted component event otherwise. The component
//! sees only its own events; which event it sees is the emit rule's choice,
//! decided from the system event and state. The projected value is therefore
//! itself a state variable: a function of the system trace.
//!
//! When a model declares a rendezvous pair, every step is additionally
//! validated: the multiset of sent (value, peer) pairs must match the
//! multiset of received ones, so a receive can only appear simultaneously
//! with its send and vice versa.

use thiserror::Error;

use crate::kernel::expr::{eval, eval_bool, EvalCtx, EventPattern, Expr};
use crate::kernel::model::{Model, StateTuple, StepError};
use crate::kernel::value::{ComponentState, Rational, Value};
use crate::kernel::Event;

/// One emit clause: on a matching system event (with optional refinement),
/// feed the component the event built from `head` and evaluated `args`.
#[derive(Debug, Clone)]
pub struct EmitClause {
    pub pattern: EventPattern,
    pub when: Option<Expr>,
    pub head: String,
    pub args: Vec<Expr>,
}

/// A projection binding: `project <name> for <id> into <component> freeze <e> emit {...}`.
#[derive(Debug, Clone)]
pub struct Projection {
    pub name: String,
    /// Process identity used for rendezvous matching.
    pub for_id: Value,
    /// Index into the model's component list.
    pub component: usize,
    /// Freeze guard over pre- and post-event system state. When it holds the
    /// component state is copied through unchanged.
    pub freeze: Expr,
    pub emit: Vec<EmitClause>,
}

/// Declared rendezvous head pair. Send events carry `(value, target-id)`,
/// receive events `(value, source-id)`.
#[derive(Debug, Clone)]
pub struct RendezvousSpec {
    pub send_head: String,
    pub receive_head: String,
}

/// Failure reading an exported component variable.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExportError {
    #[error("no projection named {0}")]
    UnknownProjection(String),
    #[error("component {component} does not export {var}")]
    UnknownExport { component: String, var: String },
}

/// Advance every projection slot for one system step. `post` holds the
/// already-updated system variables; projection slots are appended in
/// declaration order. Rendezvous validation runs after all projections have
/// advanced, so simultaneity is checked against the whole step.
pub(crate) fn advance_projections(
    model: &Model,
    pre: &StateTuple,
    post: &mut Vec<Value>,
    event: &Event,
    measure: &Rational,
) -> Result<(), StepError> {
    if model.projections.is_empty() {
        return Ok(());
    }
    let mut emitted: Vec<Option<Event>> = Vec::with_capacity(model.projections.len());
    for (idx, proj) in model.projections.iter().enumerate() {
        let (value, sent) = advance_one(model, idx, proj, pre, post, event, measure)?;
        post.push(value);
        emitted.push(sent);
    }
    if let Some(rv) = &model.rendezvous {
        validate_rendezvous(model, rv, &emitted)?;
    }
    Ok(())
}

fn advance_one(
    model: &Model,
    idx: usize,
    proj: &Projection,
    pre: &StateTuple,
    post: &[Value],
    event: &Event,
    measure: &Rational,
) -> Result<(Value, Option<Event>), StepError> {
    let slot = model.vars.len() + idx;
    let ctx = EvalCtx {
        pre: &pre.0,
        post: Some(post),
        event: Some(event),
        measure: Some(measure),
    };
    if eval_bool(&proj.freeze, &ctx)? {
        return Ok((pre.0[slot].clone(), None));
    }
    let comp_event = emit_event(proj, &ctx)?.ok_or_else(|| StepError::NoEmission {
        projection: proj.name.clone(),
        event: event.clone(),
    })?;
    let comp = model.projection_component(proj);
    let comp_name = &model.components[proj.component].0;
    if !comp.event_declared(&comp_event) {
        return Err(StepError::InvalidComponentEvent {
            projection: proj.name.clone(),
            component: comp_name.clone(),
            event: comp_event,
        });
    }
    let prev = pre.0[slot]
        .as_comp()
        .expect("projection slot holds a component state");
    let prev_tuple = StateTuple(prev.values.clone());
    if !comp.is_defined(&prev_tuple, &comp_event)? {
        return Err(StepError::UndefinedComponentTransition {
            projection: proj.name.clone(),
            component: comp_name.clone(),
            event: comp_event,
        });
    }
    let next_tuple = comp.step_unchecked(&prev_tuple, &comp_event)?;
    let raw_trace = prev.raw_trace.as_ref().map(|t| {
        let mut t = t.clone();
        t.push(comp_event.clone());
        t
    });
    let next = ComponentState {
        values: next_tuple.0,
        raw_trace,
    };
    Ok((Value::Comp(Box::new(next)), Some(comp_event)))
}

fn emit_event(proj: &Projection, ctx: &EvalCtx<'_>) -> Result<Option<Event>, StepError> {
    let event = ctx.event.expect("emit evaluation has an event in scope");
    for clause in &proj.emit {
        if !clause.pattern.matches(event) {
            continue;
        }
        if let Some(w) = &clause.when {
            if !eval_bool(w, ctx)? {
                continue;
            }
        }
        let mut args = Vec::with_capacity(clause.args.len());
        for a in &clause.args {
            args.push(eval(a, ctx)?);
        }
        return Ok(Some(Event::new(clause.head.clone(), args)));
    }
    Ok(None)
}

/// Check send/receive pairing for one step. Every `(send v q)` emitted by the
/// projection with identity `p` must be matched by `(receive v p)` emitted by
/// the projection with identity `q`, one-for-one, and vice versa.
fn validate_rendezvous(
    model: &Model,
    rv: &RendezvousSpec,
    emitted: &[Option<Event>],
) -> Result<(), StepError> {
    // Both sides normalized to (source-id, value, target-id).
    let mut sends: Vec<(Value, Value, Value)> = Vec::new();
    let mut receives: Vec<(Value, Value, Value)> = Vec::new();
    for (idx, ev) in emitted.iter().enumerate() {
        let Some(ev) = ev else { continue };
        let me = model.projections[idx].for_id.clone();
        if ev.head == rv.send_head {
            let (v, q) = pair_args(ev)?;
            sends.push((me, v, q));
        } else if ev.head == rv.receive_head {
            let (v, p) = pair_args(ev)?;
            receives.push((p, v, me));
        }
    }
    sends.sort();
    receives.sort();
    if sends != receives {
        let detail = describe_mismatch(rv, &sends, &receives);
        return Err(StepError::RendezvousViolation { detail });
    }
    Ok(())
}

fn pair_args(ev: &Event) -> Result<(Value, Value), StepError> {
    if ev.args.len() != 2 {
        return Err(StepError::RendezvousViolation {
            detail: format!("{ev} must carry exactly (value, peer)"),
        });
    }
    Ok((ev.args[0].clone(), ev.args[1].clone()))
}

fn describe_mismatch(
    rv: &RendezvousSpec,
    sends: &[(Value, Value, Value)],
    receives: &[(Value, Value, Value)],
) -> String {
    for s in sends {
        if !receives.contains(s) {
            return format!(
                "({} {} {}) from {} has no matching {}",
                rv.send_head, s.1, s.2, s.0, rv.receive_head
            );
        }
    }
    for r in receives {
        if !sends.contains(r) {
            return format!(
                "({} {} {}) at {} has no matching {}",
                rv.receive_head, r.1, r.0, r.2, rv.send_head
            );
        }
    }
    "send/receive multiplicity mismatch".to_string()
}

/// Advance a single named projection by one system event and return its new
/// component state. The system variables are stepped internally to provide
/// the post-event context the freeze guard and emit rule may read; the other
/// projections are untouched.
pub fn project_step(
    model: &Model,
    projection: &str,
    pre: &StateTuple,
    event: &Event,
) -> Result<ComponentState, StepError> {
    let idx = model
        .projections
        .iter()
        .position(|p| p.name == projection)
        .unwrap_or_else(|| panic!("project_step: unknown projection {projection:?}"));
    let measure = model.measure_of(event)?;
    let mut post: Vec<Value> = Vec::with_capacity(model.vars.len());
    for v in &model.vars {
        let val = {
            let ctx = EvalCtx {
                pre: &pre.0,
                post: Some(&post),
                event: Some(event),
                measure: Some(&measure),
            };
            crate::kernel::model::eval_update(v, &ctx)?
        };
        post.push(val);
    }
    let proj = &model.projections[idx];
    let (value, _) = advance_one(model, idx, proj, pre, &post, event, &measure)?;
    match value {
        Value::Comp(c) => Ok(*c),
        _ => unreachable!("projection slot advanced to a non-component value"),
    }
}

/// Step a model that declares a rendezvous pair, enforcing the per-step
/// send/receive pairing. This is [`Model::step`]: validation is part of every
/// step of such a model; the alias exists so call sites can name the intent.
pub fn rendezvous_step(
    model: &Model,
    s: &StateTuple,
    event: &Event,
) -> Result<StateTuple, StepError> {
    model.step(s, event)
}

/// Read an exported component variable out of a projection slot.
pub fn eval_component_var(
    model: &Model,
    s: &StateTuple,
    projection: &str,
    var: &str,
) -> Result<Value, ExportError> {
    let (idx, proj) = model
        .projections
        .iter()
        .enumerate()
        .find(|(_, p)| p.name == projection)
        .ok_or_else(|| ExportError::UnknownProjection(projection.to_string()))?;
    let comp = model.projection_component(proj);
    let comp_name = &model.components[proj.component].0;
    let vpos = comp.vars.iter().position(|v| v.name == var);
    let exported = vpos.is_some_and(|i| comp.exports.contains(&i));
    if !exported {
        return Err(ExportError::UnknownExport {
            component: comp_name.clone(),
            var: var.to_string(),
        });
    }
    let slot = model.vars.len() + idx;
    let cs = s.0[slot]
        .as_comp()
        .expect("projection slot holds a component state");
    Ok(cs.values[vpos.unwrap()].clone())
}
