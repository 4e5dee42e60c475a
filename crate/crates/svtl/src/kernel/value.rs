//! Runtime values: booleans, exact rationals, symbols, and component states.
//!
//! Equality on values is decidable and total, which is what makes state
//! tuples usable as memoization keys during exploration. Rationals are
//! arbitrary-precision (`BigRational`), so accumulator variables never
//! overflow no matter how long the trace is.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::event::Event;

/// Exact rational number used for all numeric quantities.
pub type Rational = BigRational;

/// Build a rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Build a rational from a numerator/denominator pair. Panics on zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Format a rational as `n` when integral, `n/d` otherwise.
pub fn fmt_rat(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// State of one projected component: the component's own variable tuple.
///
/// `raw_trace` is the sequence of component events appended so far. It is
/// recorded only when the run started from a debug-mode initial state, and it
/// is deliberately excluded from `Eq`/`Hash`/`Ord`: two component states with
/// the same variable tuple are the same state no matter how they were reached,
/// so memoization behaves identically with and without recording.
#[derive(Debug, Clone)]
pub struct ComponentState {
    pub values: Vec<Value>,
    pub raw_trace: Option<Vec<Event>>,
}

impl ComponentState {
    pub fn new(values: Vec<Value>, record: bool) -> Self {
        ComponentState {
            values,
            raw_trace: if record { Some(Vec::new()) } else { None },
        }
    }
}

impl PartialEq for ComponentState {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl Eq for ComponentState {}

impl Hash for ComponentState {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.values.hash(state);
    }
}

impl PartialOrd for ComponentState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ComponentState {
    fn cmp(&self, other: &Self) -> Ordering {
        self.values.cmp(&other.values)
    }
}

/// A runtime value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bool(bool),
    Rat(Rational),
    Sym(String),
    Comp(Box<ComponentState>),
}

impl Value {
    pub fn sort(&self) -> Sort {
        match self {
            Value::Bool(_) => Sort::Bool,
            Value::Rat(_) => Sort::Rat,
            Value::Sym(_) => Sort::Symbol,
            Value::Comp(_) => Sort::Component,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_rat(&self) -> Option<&Rational> {
        match self {
            Value::Rat(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_comp(&self) -> Option<&ComponentState> {
        match self {
            Value::Comp(c) => Some(c),
            _ => None,
        }
    }

    /// True for nonnegative rationals; false for everything else.
    pub fn is_nonneg_rat(&self) -> bool {
        matches!(self, Value::Rat(q) if !q.is_negative())
    }

    pub fn int(n: i64) -> Value {
        Value::Rat(rat_int(n))
    }

    pub fn zero() -> Value {
        Value::Rat(Rational::zero())
    }
}

/// Sort (type) of a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sort {
    Bool,
    Rat,
    Symbol,
    Component,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => write!(f, "bool"),
            Sort::Rat => write!(f, "rat"),
            Sort::Symbol => write!(f, "symbol"),
            Sort::Component => write!(f, "component"),
        }
    }
}

impl fmt::Display for Value {
    /// Bare rendering as used in traces and state dumps: `true`, `3/2`, `idle`.
    /// Component states render positionally; model-aware printing lives in
    /// [`crate::kernel::Model::format_state`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Rat(q) => write!(f, "{}", fmt_rat(q)),
            Value::Sym(s) => write!(f, "{s}"),
            Value::Comp(c) => {
                write!(f, "{{")?;
                for (i, v) in c.values.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}
