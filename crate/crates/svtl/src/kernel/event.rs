//! Events and traces, plus the line-oriented trace file format.
//!
//! An event is a head symbol with zero or more argument values, written as an
//! s-expression: `(sched 1)`, `(send 2 7)`, `(tick)`. A trace file holds one
//! event per line; `;` starts a comment and blank lines are skipped, so
//! witness files can carry human-readable annotations and still replay.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use super::value::Value;

/// One event: head plus argument values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    pub head: String,
    pub args: Vec<Value>,
}

impl Event {
    pub fn new(head: impl Into<String>, args: Vec<Value>) -> Self {
        Event {
            head: head.into(),
            args,
        }
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    /// Lexicographic: head first, then arguments. This is the order in which
    /// the explorer enumerates successor events, so it must be total and
    /// stable.
    fn cmp(&self, other: &Self) -> Ordering {
        self.head
            .cmp(&other.head)
            .then_with(|| self.args.cmp(&other.args))
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.head)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

/// A finite event sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Trace(pub Vec<Event>);

impl Trace {
    pub fn new(events: Vec<Event>) -> Self {
        Trace(events)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Event> {
        self.0.iter()
    }

    /// Render in the trace file format, one event per line.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for e in &self.0 {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

impl FromIterator<Event> for Trace {
    fn from_iter<T: IntoIterator<Item = Event>>(iter: T) -> Self {
        Trace(iter.into_iter().collect())
    }
}

/// Error reading a trace file.
#[derive(Debug, Error)]
pub enum TraceParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
}

/// Parse trace file text. Each non-blank, non-comment line is one event.
///
/// Event arguments are decimal integers or bare symbol tokens; a bare token
/// line is accepted as a zero-argument event.
pub fn parse_trace(text: &str) -> Result<Trace, TraceParseError> {
    let mut events = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find(';') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        events.push(parse_event_line(line, line_no)?);
    }
    Ok(Trace(events))
}

fn parse_event_line(line: &str, line_no: usize) -> Result<Event, TraceParseError> {
    let malformed = |msg: &str| TraceParseError::Malformed {
        line: line_no,
        msg: msg.to_string(),
    };
    let inner = if let Some(stripped) = line.strip_prefix('(') {
        stripped
            .strip_suffix(')')
            .ok_or_else(|| malformed("missing closing parenthesis"))?
    } else {
        // Bare token form: a zero-argument event head.
        if line.contains(|c: char| c.is_whitespace() || c == '(' || c == ')') {
            return Err(malformed("expected `(head args...)` or a bare head token"));
        }
        return Ok(Event::new(line, vec![]));
    };
    if inner.contains('(') || inner.contains(')') {
        return Err(malformed("nested parentheses are not allowed in events"));
    }
    let mut parts = inner.split_whitespace();
    let head = parts.next().ok_or_else(|| malformed("empty event"))?;
    if !is_token(head) || head.chars().next().is_some_and(|c| c.is_ascii_digit() || c == '-') {
        return Err(malformed("event head must be a symbol token"));
    }
    let mut args = Vec::new();
    for p in parts {
        args.push(parse_arg(p).ok_or_else(|| malformed("bad event argument"))?);
    }
    Ok(Event::new(head, args))
}

fn is_token(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn parse_arg(p: &str) -> Option<Value> {
    if p.chars()
        .next()
        .is_some_and(|c| c.is_ascii_digit() || c == '-')
    {
        let n: i64 = p.parse().ok()?;
        Some(Value::int(n))
    } else if p == "true" || p == "false" {
        Some(Value::Bool(p == "true"))
    } else if is_token(p) {
        Some(Value::Sym(p.to_string()))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let text = "; a comment\n(sched 1)\n\n(send 2 7)\n(jump high)\n(tick)\n";
        let t = parse_trace(text).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.0[0], Event::new("sched", vec![Value::int(1)]));
        assert_eq!(t.0[1], Event::new("send", vec![Value::int(2), Value::int(7)]));
        assert_eq!(t.0[2], Event::new("jump", vec![Value::Sym("high".into())]));
        assert_eq!(t.0[3], Event::new("tick", vec![]));
        let reparsed = parse_trace(&t.to_file_string()).unwrap();
        assert_eq!(t, reparsed);
    }

    #[test]
    fn bare_head_accepted() {
        let t = parse_trace("tick\n").unwrap();
        assert_eq!(t.0[0], Event::new("tick", vec![]));
    }

    #[test]
    fn inline_comment_stripped() {
        let t = parse_trace("(sched 1) ; first\n").unwrap();
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn malformed_lines_error_with_position() {
        let err = parse_trace("(sched 1)\n(bad\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        assert!(parse_trace("(1bad)").is_err());
        assert!(parse_trace("((x))").is_err());
    }

    #[test]
    fn event_order_is_head_then_args() {
        let mut es = vec![
            Event::new("sched", vec![Value::int(2)]),
            Event::new("block", vec![Value::int(1)]),
            Event::new("sched", vec![Value::int(1)]),
        ];
        es.sort();
        assert_eq!(es[0].head, "block");
        assert_eq!(es[1], Event::new("sched", vec![Value::int(1)]));
    }
}
