//! Compiled expressions over state tuples.
//!
//! Expressions arrive from the surface language with names; static checking
//! resolves every reference to a dense index, so evaluation is a plain walk
//! with slot lookups. Pre-event references read the current tuple; post-event
//! references read the partially built successor tuple (update clauses may
//! only look at variables declared earlier, which the static checker
//! guarantees, so the slice is always long enough).

use thiserror::Error;

use super::event::Event;
use super::value::{Rational, Sort, Value};

/// Comparison operators. Equality is defined on any matching sort; order
/// comparisons only on rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

/// Event pattern: a head plus per-argument literal-or-wildcard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventPattern {
    pub head: String,
    pub args: Vec<PatArg>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatArg {
    Wild,
    Lit(Value),
}

impl EventPattern {
    pub fn matches(&self, e: &Event) -> bool {
        self.head == e.head
            && self.args.len() == e.args.len()
            && self
                .args
                .iter()
                .zip(&e.args)
                .all(|(p, a)| match p {
                    PatArg::Wild => true,
                    PatArg::Lit(v) => v == a,
                })
    }
}

/// A compiled expression. Variable references are slot indices into the
/// owning model's tuple layout.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Lit(Value),
    /// Pre-event value of slot `i`.
    Pre(usize),
    /// Post-event value of slot `i` (the primed form `v'`).
    Post(usize),
    /// Pre-event value of an exported component variable: `EXPORT(projection)`.
    CompExport { slot: usize, export: usize },
    /// `m(a)`: the measure of the current event.
    MeasureOfEvent,
    /// `a = (head args...)`, with wildcards allowed in the pattern.
    EventIs(EventPattern),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

/// Evaluation context: which tuples and event data are visible.
pub struct EvalCtx<'a> {
    /// Pre-event tuple values (full).
    pub pre: &'a [Value],
    /// Post-event values computed so far, in slot order. `None` in contexts
    /// with no post-event state (definedness guards, plain property atoms).
    pub post: Option<&'a [Value]>,
    /// The event being applied, when one is in scope.
    pub event: Option<&'a Event>,
    /// Measure of that event.
    pub measure: Option<&'a Rational>,
}

/// Runtime evaluation failure. The static checker rules these out for models
/// it has accepted; they surface only for hand-built or deliberately broken
/// model data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("slot {0} not available in this context")]
    SlotUnavailable(usize),
    #[error("post-event value of slot {0} not yet computed")]
    PostUnavailable(usize),
    #[error("event not available in this context")]
    EventUnavailable,
    #[error("expected {expected} value, found {found}")]
    SortMismatch { expected: Sort, found: Sort },
    #[error("comparison between {0} and {1}")]
    CmpMismatch(Sort, Sort),
    #[error("slot {slot} does not hold a component state")]
    NotAComponent { slot: usize },
    #[error("component export index {export} out of range for slot {slot}")]
    BadExport { slot: usize, export: usize },
}

pub fn eval(e: &Expr, ctx: &EvalCtx<'_>) -> Result<Value, EvalError> {
    match e {
        Expr::Lit(v) => Ok(v.clone()),
        Expr::Pre(i) => ctx
            .pre
            .get(*i)
            .cloned()
            .ok_or(EvalError::SlotUnavailable(*i)),
        Expr::Post(i) => ctx
            .post
            .and_then(|p| p.get(*i))
            .cloned()
            .ok_or(EvalError::PostUnavailable(*i)),
        Expr::CompExport { slot, export } => {
            let v = ctx
                .pre
                .get(*slot)
                .ok_or(EvalError::SlotUnavailable(*slot))?;
            let comp = v.as_comp().ok_or(EvalError::NotAComponent { slot: *slot })?;
            comp.values
                .get(*export)
                .cloned()
                .ok_or(EvalError::BadExport {
                    slot: *slot,
                    export: *export,
                })
        }
        Expr::MeasureOfEvent => ctx
            .measure
            .map(|q| Value::Rat(q.clone()))
            .ok_or(EvalError::EventUnavailable),
        Expr::EventIs(pat) => {
            let ev = ctx.event.ok_or(EvalError::EventUnavailable)?;
            Ok(Value::Bool(pat.matches(ev)))
        }
        Expr::Not(x) => Ok(Value::Bool(!eval_bool(x, ctx)?)),
        Expr::And(l, r) => Ok(Value::Bool(eval_bool(l, ctx)? && eval_bool(r, ctx)?)),
        Expr::Or(l, r) => Ok(Value::Bool(eval_bool(l, ctx)? || eval_bool(r, ctx)?)),
        Expr::Implies(l, r) => Ok(Value::Bool(!eval_bool(l, ctx)? || eval_bool(r, ctx)?)),
        Expr::Cmp(op, l, r) => {
            let lv = eval(l, ctx)?;
            let rv = eval(r, ctx)?;
            eval_cmp(*op, &lv, &rv)
        }
        Expr::Add(l, r) => Ok(Value::Rat(eval_rat(l, ctx)? + eval_rat(r, ctx)?)),
        Expr::Sub(l, r) => Ok(Value::Rat(eval_rat(l, ctx)? - eval_rat(r, ctx)?)),
        Expr::Mul(l, r) => Ok(Value::Rat(eval_rat(l, ctx)? * eval_rat(r, ctx)?)),
        Expr::Neg(x) => Ok(Value::Rat(-eval_rat(x, ctx)?)),
    }
}

pub fn eval_bool(e: &Expr, ctx: &EvalCtx<'_>) -> Result<bool, EvalError> {
    match eval(e, ctx)? {
        Value::Bool(b) => Ok(b),
        v => Err(EvalError::SortMismatch {
            expected: Sort::Bool,
            found: v.sort(),
        }),
    }
}

fn eval_rat(e: &Expr, ctx: &EvalCtx<'_>) -> Result<Rational, EvalError> {
    match eval(e, ctx)? {
        Value::Rat(q) => Ok(q),
        v => Err(EvalError::SortMismatch {
            expected: Sort::Rat,
            found: v.sort(),
        }),
    }
}

fn eval_cmp(op: CmpOp, l: &Value, r: &Value) -> Result<Value, EvalError> {
    match op {
        CmpOp::Eq | CmpOp::Ne => {
            if l.sort() != r.sort() {
                return Err(EvalError::CmpMismatch(l.sort(), r.sort()));
            }
            let eq = l == r;
            Ok(Value::Bool(if op == CmpOp::Eq { eq } else { !eq }))
        }
        _ => {
            let (lq, rq) = match (l, r) {
                (Value::Rat(a), Value::Rat(b)) => (a, b),
                _ => return Err(EvalError::CmpMismatch(l.sort(), r.sort())),
            };
            let b = match op {
                CmpOp::Lt => lq < rq,
                CmpOp::Le => lq <= rq,
                CmpOp::Gt => lq > rq,
                CmpOp::Ge => lq >= rq,
                CmpOp::Eq | CmpOp::Ne => unreachable!(),
            };
            Ok(Value::Bool(b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::value::rat_int;

    fn ctx<'a>(pre: &'a [Value]) -> EvalCtx<'a> {
        EvalCtx {
            pre,
            post: None,
            event: None,
            measure: None,
        }
    }

    #[test]
    fn arithmetic_and_comparison() {
        let pre = vec![Value::int(2)];
        let e = Expr::Cmp(
            CmpOp::Lt,
            Box::new(Expr::Add(
                Box::new(Expr::Pre(0)),
                Box::new(Expr::Lit(Value::int(1))),
            )),
            Box::new(Expr::Lit(Value::int(4))),
        );
        assert_eq!(eval(&e, &ctx(&pre)).unwrap(), Value::Bool(true));
    }

    #[test]
    fn event_pattern_wildcards() {
        let pat = EventPattern {
            head: "sched".into(),
            args: vec![PatArg::Wild],
        };
        assert!(pat.matches(&Event::new("sched", vec![Value::int(2)])));
        assert!(!pat.matches(&Event::new("sched", vec![])));
        assert!(!pat.matches(&Event::new("tick", vec![Value::int(2)])));
    }

    #[test]
    fn post_reference_requires_post_context() {
        let pre = vec![Value::Bool(true)];
        let e = Expr::Post(0);
        assert!(matches!(
            eval(&e, &ctx(&pre)),
            Err(EvalError::PostUnavailable(0))
        ));
        let post = vec![Value::Bool(false)];
        let c = EvalCtx {
            pre: &pre,
            post: Some(&post),
            event: None,
            measure: None,
        };
        assert_eq!(eval(&e, &c).unwrap(), Value::Bool(false));
    }

    #[test]
    fn measure_of_event() {
        let pre: Vec<Value> = vec![];
        let q = rat_int(3);
        let ev = Event::new("tick", vec![]);
        let c = EvalCtx {
            pre: &pre,
            post: None,
            event: Some(&ev),
            measure: Some(&q),
        };
        assert_eq!(eval(&Expr::MeasureOfEvent, &c).unwrap(), Value::int(3));
    }

    #[test]
    fn symbol_equality_only() {
        let l = Value::Sym("x".into());
        let r = Value::Sym("y".into());
        assert_eq!(eval_cmp(CmpOp::Ne, &l, &r).unwrap(), Value::Bool(true));
        assert!(eval_cmp(CmpOp::Lt, &l, &r).is_err());
    }
}
