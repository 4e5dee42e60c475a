//! Shared oracle machinery for the integration tests.
//!
//! Everything here deliberately avoids the crate's explorer and temporal
//! checker: states are enumerated by a plain breadth-first walk over
//! `Model::step`, and the temporal operators are written out as the literal
//! textbook recursions over that enumeration. Tests compare the crate's
//! answers against these.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use svtl::kernel::{Event, Model, StateTuple, Trace};

/// States and defined transitions found by a plain breadth-first walk.
pub struct OracleGraph {
    pub states: Vec<StateTuple>,
    pub succ: Vec<Vec<(Event, usize)>>,
    pub complete: bool,
}

/// Enumerate reachable states by breadth-first search over `Model::step`,
/// giving up (with `complete: false`) once `cap` states have been found.
pub fn oracle_graph(model: &Model, cap: usize) -> OracleGraph {
    let mut states = vec![model.init_state()];
    let mut ids: HashMap<StateTuple, usize> = HashMap::new();
    ids.insert(states[0].clone(), 0);
    let mut succ: Vec<Vec<(Event, usize)>> = vec![Vec::new()];
    let mut complete = true;
    let mut next = 0;
    while next < states.len() {
        let here = states[next].clone();
        for e in model.defined_events(&here).expect("defined_events") {
            let to = model.step(&here, &e).expect("step");
            let id = match ids.get(&to) {
                Some(&id) => id,
                None => {
                    if states.len() >= cap {
                        complete = false;
                        continue;
                    }
                    let id = states.len();
                    states.push(to.clone());
                    ids.insert(to, id);
                    succ.push(Vec::new());
                    id
                }
            };
            succ[next].push((e, id));
        }
        next += 1;
    }
    OracleGraph {
        states,
        succ,
        complete,
    }
}

/// For each node, the least `n` such that `q` is guaranteed within `n`
/// steps along every defined path; `None` where no finite `n` works.
/// Computed by iterating `n(s) = 0 if q(s) else 1 + max over successors`
/// to a fixpoint, so it is immune to cycles.
pub fn eventually_bounds(g: &OracleGraph, q: &dyn Fn(&StateTuple) -> bool) -> Vec<Option<u64>> {
    let n = g.states.len();
    let mut bounds: Vec<Option<u64>> = (0..n).map(|i| q(&g.states[i]).then_some(0)).collect();
    loop {
        let mut changed = false;
        for i in 0..n {
            if bounds[i].is_some() || g.succ[i].is_empty() {
                continue;
            }
            let mut worst = 0;
            let mut all = true;
            for &(_, j) in &g.succ[i] {
                match bounds[j] {
                    Some(b) => worst = worst.max(b),
                    None => {
                        all = false;
                        break;
                    }
                }
            }
            if all {
                bounds[i] = Some(worst + 1);
                changed = true;
            }
        }
        if !changed {
            return bounds;
        }
    }
}

/// `within[n][i]`: q now, or (n > 0, some successor exists, and every
/// successor is within n-1). Rows for n = 0 ..= max_n.
pub fn within_table(
    g: &OracleGraph,
    q: &dyn Fn(&StateTuple) -> bool,
    max_n: u32,
) -> Vec<Vec<bool>> {
    let base: Vec<bool> = g.states.iter().map(|s| q(s)).collect();
    let mut rows = vec![base.clone()];
    for _ in 0..max_n {
        let prev = rows.last().unwrap().clone();
        let row: Vec<bool> = (0..g.states.len())
            .map(|i| base[i] || (!g.succ[i].is_empty() && g.succ[i].iter().all(|&(_, j)| prev[j])))
            .collect();
        rows.push(row);
    }
    rows
}

/// Greatest fixpoint of `A = q and (some successor, and A at all of them)`:
/// q along every infinite continuation, refuted by reachable dead ends.
pub fn literal_always(g: &OracleGraph, q: &dyn Fn(&StateTuple) -> bool) -> Vec<bool> {
    let n = g.states.len();
    let mut a: Vec<bool> = g.states.iter().map(|s| q(s)).collect();
    loop {
        let mut changed = false;
        for i in 0..n {
            if a[i] && (g.succ[i].is_empty() || g.succ[i].iter().any(|&(_, j)| !a[j])) {
                a[i] = false;
                changed = true;
            }
        }
        if !changed {
            return a;
        }
    }
}

/// q at every state reachable from each node (dead ends allowed).
pub fn literal_globally(g: &OracleGraph, q: &dyn Fn(&StateTuple) -> bool) -> Vec<bool> {
    let n = g.states.len();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for &(_, j) in &g.succ[i] {
            rev[j].push(i);
        }
    }
    // A node fails iff it can reach a state violating q.
    let mut bad: Vec<bool> = g.states.iter().map(|s| !q(s)).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&i| bad[i]).collect();
    while let Some(j) = queue.pop() {
        for &i in &rev[j] {
            if !bad[i] {
                bad[i] = true;
                queue.push(i);
            }
        }
    }
    bad.iter().map(|b| !b).collect()
}

/// Random walk over defined events, up to `max_len` steps.
pub fn random_walk(model: &Model, rng: &mut ChaCha8Rng, max_len: usize) -> Trace {
    let mut state = model.init_state();
    let mut events = Vec::new();
    let len = rng.random_range(0..=max_len);
    for _ in 0..len {
        let options = model.defined_events(&state).expect("defined_events");
        if options.is_empty() {
            break;
        }
        let e = options[rng.random_range(0..options.len())].clone();
        state = model.step(&state, &e).expect("step");
        events.push(e);
    }
    Trace(events)
}

const HEADS: [&str; 3] = ["tick", "tock", "ping"];

/// Random boolean expression text over the given variable names,
/// fully parenthesized so it parses under any precedence.
fn bool_expr(rng: &mut ChaCha8Rng, vars: &[String], depth: u32) -> String {
    if depth == 0 || rng.random_bool(0.3) {
        return match rng.random_range(0..4) {
            0 => "true".to_string(),
            1 => "false".to_string(),
            _ if !vars.is_empty() => vars[rng.random_range(0..vars.len())].clone(),
            _ => "true".to_string(),
        };
    }
    let a = bool_expr(rng, vars, depth - 1);
    match rng.random_range(0..4) {
        0 => format!("(not {a})"),
        1 => format!("({a} and {})", bool_expr(rng, vars, depth - 1)),
        2 => format!("({a} or {})", bool_expr(rng, vars, depth - 1)),
        _ => format!("({a} implies {})", bool_expr(rng, vars, depth - 1)),
    }
}

/// A random loadable model as surface syntax: up to three bare events,
/// a few boolean variables with event- and guard-triggered updates,
/// optional definedness guards (dead ends included), an optional bounded
/// rational counter, and one or two temporal properties.
pub fn random_model_text(rng: &mut ChaCha8Rng) -> String {
    let nheads = rng.random_range(1..=3);
    let heads: Vec<&str> = HEADS[..nheads].to_vec();
    let nvars = rng.random_range(2..=4);
    let names: Vec<String> = (0..nvars).map(|i| format!("x{i}")).collect();

    let mut out = String::new();
    out.push_str("alphabet {\n");
    for h in &heads {
        out.push_str(&format!("  ({h})\n"));
    }
    out.push_str("}\n\n");

    for (i, name) in names.iter().enumerate() {
        let earlier = &names[..i];
        let init = if rng.random_bool(0.5) { "true" } else { "false" };
        out.push_str(&format!("var {name} : bool init {init} {{\n"));
        for h in &heads {
            if rng.random_bool(0.55) {
                let mut body = bool_expr(rng, &names, 2);
                if !earlier.is_empty() && rng.random_bool(0.25) {
                    let prev = &earlier[rng.random_range(0..earlier.len())];
                    body = format!("({body} or {prev}')");
                }
                if rng.random_bool(0.2) {
                    let when = bool_expr(rng, &names, 1);
                    out.push_str(&format!("  on ({h}) when {when} -> {body}\n"));
                } else {
                    out.push_str(&format!("  on ({h}) -> {body}\n"));
                }
            }
        }
        if rng.random_bool(0.3) {
            let guard = bool_expr(rng, &names, 1);
            let body = bool_expr(rng, &names, 2);
            out.push_str(&format!("  ({guard}) -> {body}\n"));
        }
        out.push_str(&format!("  otherwise -> {}\n", bool_expr(rng, &names, 1)));
        out.push_str("}\n\n");
    }

    let counter = rng.random_bool(0.3);
    if counter {
        out.push_str("var c : rat init 0 {\n");
        out.push_str("  (c > 1) -> 0\n");
        out.push_str(&format!("  on ({}) -> c + 1\n", heads[0]));
        out.push_str("  otherwise -> c\n}\n\n");
    }

    // Guards act as a whitelist, so either guard every event or none.
    if rng.random_bool(0.5) {
        for h in &heads {
            let cond = if rng.random_bool(0.1) {
                "false".to_string()
            } else {
                bool_expr(rng, &names, 2)
            };
            out.push_str(&format!("guard ({h}) when {cond}\n\n"));
        }
    }

    let nprops = rng.random_range(1..=2);
    for i in 0..nprops {
        let atom = bool_expr(rng, &names, 2);
        let body = match rng.random_range(0..6) {
            0 => format!("always {atom}"),
            1 => format!("globally {atom}"),
            2 => format!("eventually {atom}"),
            3 => format!("within {} {atom}", rng.random_range(0..4)),
            4 => format!("possible_next {atom}"),
            _ if counter => "bounded c < 3".to_string(),
            _ => format!("next {atom}"),
        };
        out.push_str(&format!("property p{i} = {body}\n\n"));
    }
    out
}
