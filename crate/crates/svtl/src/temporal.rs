//! Temporal operators over explored state graphs.
//!
//! Operators follow the definedness-aware readings: `Next Q` requires at
//! least one defined successor and `Q` at every defined successor; `Always`
//! is the self-propagating form (`Q` and `Next Always Q`), so a reachable
//! dead end refutes it; `Within n Q` is the bounded unfolding and
//! `Eventually Q` its existential closure; `Globally Q` is the plain
//! all-reachable-states reading, where dead ends are acceptable.
//!
//! Evaluation is three-valued. On a completely explored graph every answer
//! is definite. On a truncated graph, unexpanded frontier nodes poison
//! exactly the answers that depend on what lies beyond them: a refutation is
//! only reported when it is witnessed entirely by explored edges (a falsified
//! state, an expanded dead end, or a cycle of falsified states), and
//! everything else that touches the frontier reports Unknown instead of
//! guessing. That is what keeps Fails verdicts replayable and bounded runs
//! honest.

use std::collections::{HashMap, VecDeque};

use crate::explorer::{
    bfs_path, cyclic_nodes, explore, ExploreLimits, LassoShape, TransitionGraph, Witness,
};
use crate::kernel::{
    expr, CmpOp, Event, EvalCtx, Expr, Model, Rational, StepError, Trace, Value,
};

/// A temporal property over model states.
#[derive(Debug, Clone, PartialEq)]
pub enum Property {
    /// Boolean expression over the current state.
    Atom(Expr),
    /// Boolean expression over the current state, the next event, and the
    /// post-event state, universally quantified over defined successors.
    /// Vacuously true at a dead end (there is nothing to quantify over).
    NextAtom(Expr),
    Not(Box<Property>),
    And(Box<Property>, Box<Property>),
    Or(Box<Property>, Box<Property>),
    Implies(Box<Property>, Box<Property>),
    /// At least one defined successor, and the body at every one.
    Next(Box<Property>),
    /// At least one defined successor exists. The body is carried for shape
    /// only; definedness of the successor state does not depend on it.
    PossibleNext(Box<Property>),
    /// Body here, and Next Always body: refuted by any reachable falsifying
    /// state or dead end.
    Always(Box<Property>),
    /// Body at every reachable state; dead ends allowed.
    Globally(Box<Property>),
    /// Body now or guaranteed within `n` steps along every defined path.
    Within(u32, Box<Property>),
    /// Some `n` bounds the wait: Within n for some finite n.
    Eventually(Box<Property>),
    /// The variable's supremum over reachable states is finite.
    Bounded(usize),
    /// The variable stays strictly below `k` at every reachable state.
    BoundCompare(usize, Rational),
}

/// Check outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
    Unknown,
}

/// Result of a property check.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Counterexample for Fails: a replayable trace from the checked state,
    /// with a stem/cycle split when the refutation is a lasso.
    pub witness: Option<Witness>,
    /// Minimal uniform bound, present when an Eventually holds: for a
    /// top-level Eventually the checked state's own bound, otherwise the
    /// largest bound any state needs.
    pub bound: Option<usize>,
    /// Shallowest unexplored depth, present when the outcome is Unknown.
    pub frontier_depth: Option<usize>,
}

impl Verdict {
    fn of(outcome: Outcome) -> Self {
        Verdict {
            outcome,
            witness: None,
            bound: None,
            frontier_depth: None,
        }
    }
}

/// How much of the state space a check may explore.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Explore to closure (subject to the default safety limits).
    Exact,
    /// Explore to the given depth.
    Bounded(usize),
}

/// Three-valued truth (strong Kleene).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tri {
    F,
    U,
    T,
}

fn from_bool(b: bool) -> Tri {
    if b {
        Tri::T
    } else {
        Tri::F
    }
}

fn not3(a: Tri) -> Tri {
    match a {
        Tri::T => Tri::F,
        Tri::F => Tri::T,
        Tri::U => Tri::U,
    }
}

fn and3(a: Tri, b: Tri) -> Tri {
    match (a, b) {
        (Tri::F, _) | (_, Tri::F) => Tri::F,
        (Tri::T, Tri::T) => Tri::T,
        _ => Tri::U,
    }
}

fn or3(a: Tri, b: Tri) -> Tri {
    match (a, b) {
        (Tri::T, _) | (_, Tri::T) => Tri::T,
        (Tri::F, Tri::F) => Tri::F,
        _ => Tri::U,
    }
}

/// Whether a state has at least one defined successor. Meaningful for
/// expanded nodes; a frontier node answers false because its successors were
/// never computed (property evaluation treats such nodes as Unknown instead).
pub fn check_possible_next(graph: &TransitionGraph, s: usize) -> bool {
    graph.is_expanded(s) && !graph.edges(s).is_empty()
}

/// Check `Next body` at node `s`. The witness, if any, is relative to `s`.
pub fn check_next(
    model: &Model,
    graph: &TransitionGraph,
    s: usize,
    body: &Property,
) -> Result<Verdict, StepError> {
    verdict_at(model, graph, &Property::Next(Box::new(body.clone())), s)
}

/// Check `Within n body` at node `s`.
pub fn check_within(
    model: &Model,
    graph: &TransitionGraph,
    s: usize,
    n: u32,
    body: &Property,
) -> Result<Verdict, StepError> {
    verdict_at(model, graph, &Property::Within(n, Box::new(body.clone())), s)
}

/// Check `Eventually body` at node `s`. On Holds the verdict carries the
/// minimal bound for `s`.
pub fn check_eventually(
    model: &Model,
    graph: &TransitionGraph,
    s: usize,
    body: &Property,
) -> Result<Verdict, StepError> {
    verdict_at(model, graph, &Property::Eventually(Box::new(body.clone())), s)
}

/// Check `Always body` at node `s`.
pub fn check_always(
    model: &Model,
    graph: &TransitionGraph,
    s: usize,
    body: &Property,
) -> Result<Verdict, StepError> {
    verdict_at(model, graph, &Property::Always(Box::new(body.clone())), s)
}

/// Check `Globally body` at node `s`.
pub fn check_globally(
    model: &Model,
    graph: &TransitionGraph,
    s: usize,
    body: &Property,
) -> Result<Verdict, StepError> {
    verdict_at(model, graph, &Property::Globally(Box::new(body.clone())), s)
}

/// Supremum of a rational variable over the explored graph.
#[derive(Debug, Clone, PartialEq)]
pub enum SupOutcome {
    /// Exact supremum, attained at `node` (the lowest-id maximizer).
    Finite { value: Rational, node: usize },
    /// Exploration was truncated; only a lower bound is known.
    Unknown {
        explored_max: Option<(Rational, usize)>,
        frontier_depth: Option<usize>,
    },
}

pub fn sup_value(
    model: &Model,
    graph: &TransitionGraph,
    slot: usize,
) -> Result<SupOutcome, StepError> {
    let _ = model;
    let mut best: Option<(Rational, usize)> = None;
    for i in 0..graph.len() {
        let v = &graph.node(i).0[slot];
        let q = v.as_rat().ok_or(StepError::Eval(
            expr::EvalError::SortMismatch {
                expected: crate::kernel::Sort::Rat,
                found: v.sort(),
            },
        ))?;
        if best.as_ref().is_none_or(|(b, _)| q > b) {
            best = Some((q.clone(), i));
        }
    }
    if graph.complete() {
        let (value, node) = best.expect("graph has at least the root node");
        Ok(SupOutcome::Finite { value, node })
    } else {
        Ok(SupOutcome::Unknown {
            explored_max: best,
            frontier_depth: graph.frontier_depth(),
        })
    }
}

/// Explore from the initial state and check `prop` at the root.
pub fn check_property(
    model: &Model,
    prop: &Property,
    mode: CheckMode,
) -> Result<Verdict, StepError> {
    let limits = match mode {
        CheckMode::Exact => ExploreLimits::default(),
        CheckMode::Bounded(d) => ExploreLimits::default().with_max_depth(d),
    };
    let graph = explore(model, limits)?;
    check_on_graph(model, &graph, prop)
}

/// Check `prop` at the root of an already explored graph.
pub fn check_on_graph(
    model: &Model,
    graph: &TransitionGraph,
    prop: &Property,
) -> Result<Verdict, StepError> {
    verdict_at(model, graph, prop, TransitionGraph::ROOT)
}

fn verdict_at(
    model: &Model,
    graph: &TransitionGraph,
    prop: &Property,
    s: usize,
) -> Result<Verdict, StepError> {
    let mut ev = Eval::new(model, graph);
    let vals = ev.eval(prop)?;
    let outcome = match vals[s] {
        Tri::T => Outcome::Holds,
        Tri::F => Outcome::Fails,
        Tri::U => Outcome::Unknown,
    };
    let mut verdict = Verdict::of(outcome);
    match outcome {
        Outcome::Holds => {
            verdict.bound = if matches!(prop, Property::Eventually(_)) {
                ev.bound_sets.last().and_then(|b| b[s])
            } else {
                ev.bound_sets
                    .iter()
                    .flat_map(|set| set.iter().filter_map(|b| *b))
                    .max()
            };
        }
        Outcome::Fails => {
            let (steps, cycle_len) = ev.build_fail(prop, s)?;
            let lasso = cycle_len.map(|c| LassoShape {
                stem_len: steps.len() - c,
                cycle_len: c,
            });
            let (events, nodes): (Vec<Event>, Vec<usize>) = steps.into_iter().unzip();
            verdict.witness = Some(Witness {
                trace: Trace::new(events),
                nodes,
                lasso,
            });
        }
        Outcome::Unknown => {
            verdict.frontier_depth = graph.frontier_depth();
        }
    }
    Ok(verdict)
}

/// The evaluator: per-node three-valued values for each subformula, one
/// bottom-up pass over the whole node set per subformula.
struct Eval<'a> {
    model: &'a Model,
    graph: &'a TransitionGraph,
    /// Reverse adjacency, deduplicated per edge occurrence (duplicates are
    /// harmless for closure computations).
    rev: Vec<Vec<usize>>,
    measures: HashMap<Event, Rational>,
    /// Minimal Eventually bounds collected per Eventually subformula, in
    /// evaluation (innermost-first) order.
    bound_sets: Vec<Vec<Option<usize>>>,
}

impl<'a> Eval<'a> {
    fn new(model: &'a Model, graph: &'a TransitionGraph) -> Self {
        let n = graph.len();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for u in 0..n {
            for &(_, t) in graph.edges(u) {
                rev[t].push(u);
            }
        }
        Eval {
            model,
            graph,
            rev,
            measures: HashMap::new(),
            bound_sets: Vec::new(),
        }
    }

    fn n(&self) -> usize {
        self.graph.len()
    }

    fn measure_of(&mut self, e: &Event) -> Result<Rational, StepError> {
        if let Some(q) = self.measures.get(e) {
            return Ok(q.clone());
        }
        let q = self.model.measure_of(e)?;
        self.measures.insert(e.clone(), q.clone());
        Ok(q)
    }

    fn eval(&mut self, p: &Property) -> Result<Vec<Tri>, StepError> {
        match p {
            Property::Atom(e) => self.eval_atom(e),
            Property::NextAtom(e) => self.eval_next_atom(e),
            Property::Not(x) => Ok(self.eval(x)?.into_iter().map(not3).collect()),
            Property::And(l, r) => self.zip(l, r, and3),
            Property::Or(l, r) => self.zip(l, r, or3),
            Property::Implies(l, r) => self.zip(l, r, |a, b| or3(not3(a), b)),
            Property::Next(x) => {
                let inner = self.eval(x)?;
                Ok((0..self.n()).map(|u| self.next_at(u, &inner)).collect())
            }
            Property::PossibleNext(_) => Ok((0..self.n())
                .map(|u| {
                    if !self.graph.is_expanded(u) {
                        Tri::U
                    } else {
                        from_bool(!self.graph.edges(u).is_empty())
                    }
                })
                .collect()),
            Property::Always(x) => {
                let inner = self.eval(x)?;
                Ok(self.always_vals(&inner, true))
            }
            Property::Globally(x) => {
                let inner = self.eval(x)?;
                Ok(self.always_vals(&inner, false))
            }
            Property::Within(n, x) => {
                let inner = self.eval(x)?;
                Ok(self.within_vals(*n, &inner))
            }
            Property::Eventually(x) => {
                let inner = self.eval(x)?;
                let (tri, bounds) = self.eventually_vals(&inner);
                self.bound_sets.push(bounds);
                Ok(tri)
            }
            Property::Bounded(_) => {
                // Over a finite, fully explored node set every variable has a
                // finite maximum; only truncation leaves the answer open.
                let v = if self.graph.complete() { Tri::T } else { Tri::U };
                Ok(vec![v; self.n()])
            }
            Property::BoundCompare(slot, k) => {
                let desugared = Property::Globally(Box::new(Property::Atom(Expr::Cmp(
                    CmpOp::Lt,
                    Box::new(Expr::Pre(*slot)),
                    Box::new(Expr::Lit(Value::Rat(k.clone()))),
                ))));
                self.eval(&desugared)
            }
        }
    }

    fn zip(
        &mut self,
        l: &Property,
        r: &Property,
        f: impl Fn(Tri, Tri) -> Tri,
    ) -> Result<Vec<Tri>, StepError> {
        let lv = self.eval(l)?;
        let rv = self.eval(r)?;
        Ok(lv.into_iter().zip(rv).map(|(a, b)| f(a, b)).collect())
    }

    fn eval_atom(&self, e: &Expr) -> Result<Vec<Tri>, StepError> {
        let mut out = Vec::with_capacity(self.n());
        for u in 0..self.n() {
            let ctx = EvalCtx {
                pre: &self.graph.node(u).0,
                post: None,
                event: None,
                measure: None,
            };
            out.push(from_bool(expr::eval_bool(e, &ctx)?));
        }
        Ok(out)
    }

    fn eval_next_atom(&mut self, e: &Expr) -> Result<Vec<Tri>, StepError> {
        let mut out = Vec::with_capacity(self.n());
        for u in 0..self.n() {
            if !self.graph.is_expanded(u) {
                out.push(Tri::U);
                continue;
            }
            let mut all = true;
            for ei in 0..self.graph.edges(u).len() {
                if !self.next_atom_holds(e, u, ei)? {
                    all = false;
                    break;
                }
            }
            out.push(from_bool(all));
        }
        Ok(out)
    }

    fn next_atom_holds(&mut self, e: &Expr, u: usize, edge_idx: usize) -> Result<bool, StepError> {
        let (ev, t) = &self.graph.edges(u)[edge_idx];
        let ev = ev.clone();
        let t = *t;
        let m = self.measure_of(&ev)?;
        let ctx = EvalCtx {
            pre: &self.graph.node(u).0,
            post: Some(&self.graph.node(t).0),
            event: Some(&ev),
            measure: Some(&m),
        };
        Ok(expr::eval_bool(e, &ctx)?)
    }

    fn next_at(&self, u: usize, inner: &[Tri]) -> Tri {
        if !self.graph.is_expanded(u) {
            return Tri::U;
        }
        let edges = self.graph.edges(u);
        if edges.is_empty() {
            return Tri::F;
        }
        edges
            .iter()
            .fold(Tri::T, |acc, &(_, t)| and3(acc, inner[t]))
    }

    /// Shared backbone for Always (dead ends refute) and Globally (dead ends
    /// allowed): backward closures over explored edges.
    fn always_vals(&self, inner: &[Tri], deadends_refute: bool) -> Vec<Tri> {
        let n = self.n();
        let bad: Vec<bool> = (0..n)
            .map(|u| {
                inner[u] == Tri::F || (deadends_refute && self.graph.is_dead_end(u))
            })
            .collect();
        let can_fail = self.backward_closure(&bad, |_| true);
        let unk: Vec<bool> = (0..n)
            .map(|u| inner[u] == Tri::U || self.graph.is_frontier(u))
            .collect();
        let can_unk = self.backward_closure(&unk, |_| true);
        (0..n)
            .map(|u| {
                if can_fail[u] {
                    Tri::F
                } else if can_unk[u] {
                    Tri::U
                } else {
                    Tri::T
                }
            })
            .collect()
    }

    fn within_vals(&self, n: u32, inner: &[Tri]) -> Vec<Tri> {
        let mut level: Vec<Tri> = inner.to_vec();
        for _ in 0..n {
            let prev = level;
            level = (0..self.n())
                .map(|u| {
                    if inner[u] == Tri::T {
                        return Tri::T;
                    }
                    let step = if !self.graph.is_expanded(u) {
                        Tri::U
                    } else if self.graph.edges(u).is_empty() {
                        Tri::F
                    } else {
                        self.graph
                            .edges(u)
                            .iter()
                            .fold(Tri::T, |acc, &(_, t)| and3(acc, prev[t]))
                    };
                    or3(inner[u], step)
                })
                .collect();
        }
        level
    }

    /// Eventually: per node, False exactly when a falsified region traps the
    /// run (a cycle or dead end reachable through falsified states), True
    /// with a minimal bound when every defined path is forced into a
    /// satisfying state, Unknown otherwise.
    fn eventually_vals(&self, inner: &[Tri]) -> (Vec<Tri>, Vec<Option<usize>>) {
        let n = self.n();
        let is_false = |u: usize| inner[u] == Tri::F;
        // Definitely failing: falsified cycles and falsified dead ends,
        // closed backward through falsified states.
        let cyc = cyclic_nodes(self.graph, &is_false);
        let seeds: Vec<bool> = (0..n)
            .map(|u| is_false(u) && (cyc[u] || self.graph.is_dead_end(u)))
            .collect();
        let df = self.backward_closure(&seeds, is_false);
        // Definitely succeeding, with bounds, by upward fixpoint.
        let mut bound: Vec<Option<usize>> = (0..n)
            .map(|u| if inner[u] == Tri::T { Some(0) } else { None })
            .collect();
        loop {
            let mut changed = false;
            for u in 0..n {
                if bound[u].is_some() || df[u] || inner[u] == Tri::T {
                    continue;
                }
                if !self.graph.is_expanded(u) || self.graph.edges(u).is_empty() {
                    continue;
                }
                let mut worst = 0usize;
                let mut ok = true;
                for &(_, t) in self.graph.edges(u) {
                    match bound[t] {
                        Some(b) => worst = worst.max(b),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    bound[u] = Some(worst + 1);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let tri = (0..n)
            .map(|u| {
                if bound[u].is_some() {
                    Tri::T
                } else if df[u] {
                    Tri::F
                } else {
                    Tri::U
                }
            })
            .collect();
        (tri, bound)
    }

    /// Nodes from which some explored path reaches a seed, moving only
    /// through nodes accepted by `filter` (seeds themselves included as-is).
    fn backward_closure(&self, seeds: &[bool], filter: impl Fn(usize) -> bool) -> Vec<bool> {
        let mut set = seeds.to_vec();
        let mut queue: VecDeque<usize> =
            (0..set.len()).filter(|&u| set[u]).collect();
        while let Some(t) = queue.pop_front() {
            for &u in &self.rev[t] {
                if !set[u] && filter(u) {
                    set[u] = true;
                    queue.push_back(u);
                }
            }
        }
        set
    }

    /// Build the failure evidence for `p` at `u` (which must evaluate False):
    /// the explored steps to follow and, when the evidence is a lasso, the
    /// cycle length at the tail.
    #[allow(clippy::type_complexity)]
    fn build_fail(
        &mut self,
        p: &Property,
        u: usize,
    ) -> Result<(Vec<(Event, usize)>, Option<usize>), StepError> {
        match p {
            Property::Atom(_) | Property::PossibleNext(_) | Property::Not(_) => {
                Ok((Vec::new(), None))
            }
            Property::Bounded(_) => Ok((Vec::new(), None)),
            Property::NextAtom(e) => {
                for ei in 0..self.graph.edges(u).len() {
                    if !self.next_atom_holds(e, u, ei)? {
                        let (ev, t) = &self.graph.edges(u)[ei];
                        return Ok((vec![(ev.clone(), *t)], None));
                    }
                }
                Ok((Vec::new(), None))
            }
            Property::And(l, r) => {
                if self.eval(l)?[u] == Tri::F {
                    self.build_fail(l, u)
                } else {
                    self.build_fail(r, u)
                }
            }
            Property::Or(l, _) => self.build_fail(l, u),
            Property::Implies(_, r) => self.build_fail(r, u),
            Property::Next(x) => {
                let inner = self.eval(x)?;
                let edges = self.graph.edges(u);
                if edges.is_empty() {
                    return Ok((Vec::new(), None));
                }
                for &(ref ev, t) in edges {
                    if inner[t] == Tri::F {
                        let (mut steps, lasso) = self.build_fail(x, t)?;
                        steps.insert(0, (ev.clone(), t));
                        return Ok((steps, lasso));
                    }
                }
                Ok((Vec::new(), None))
            }
            Property::Within(n, x) => {
                let inner = self.eval(x)?;
                let mut steps = Vec::new();
                let mut cur = u;
                let mut k = *n;
                loop {
                    if k == 0 {
                        let (mut tail, lasso) = self.build_fail(x, cur)?;
                        let mut all = steps;
                        all.append(&mut tail);
                        return Ok((all, lasso));
                    }
                    let edges = self.graph.edges(cur);
                    if edges.is_empty() {
                        return Ok((steps, None));
                    }
                    let level = self.within_vals(k - 1, &inner);
                    let Some(&(ref ev, t)) =
                        edges.iter().find(|&&(_, t)| level[t] == Tri::F)
                    else {
                        return Ok((steps, None));
                    };
                    steps.push((ev.clone(), t));
                    cur = t;
                    k -= 1;
                }
            }
            Property::Eventually(x) => {
                let inner = self.eval(x)?;
                let is_false = |v: usize| inner[v] == Tri::F;
                let cyc = cyclic_nodes(self.graph, &is_false);
                let seed =
                    |v: usize| is_false(v) && (cyc[v] || self.graph.is_dead_end(v));
                let path = bfs_path(self.graph, u, seed, &is_false, false)
                    .expect("a failing Eventually reaches a falsified cycle or dead end");
                let end = path.last().map_or(u, |&(_, t)| t);
                if cyc[end] {
                    let cycle = bfs_path(self.graph, end, |t| t == end, &is_false, true)
                        .expect("cyclic node lies on a falsified cycle");
                    let cycle_len = cycle.len();
                    let mut steps = path;
                    steps.extend(cycle);
                    Ok((steps, Some(cycle_len)))
                } else {
                    Ok((path, None))
                }
            }
            Property::Always(x) | Property::Globally(x) => {
                let refute_deadends = matches!(p, Property::Always(_));
                let inner = self.eval(x)?;
                let bad = |v: usize| {
                    inner[v] == Tri::F || (refute_deadends && self.graph.is_dead_end(v))
                };
                let path = bfs_path(self.graph, u, &bad, &|_| true, false)
                    .expect("a failing Always/Globally reaches a bad state");
                let end = path.last().map_or(u, |&(_, t)| t);
                if inner[end] == Tri::F {
                    let (tail, lasso) = self.build_fail(x, end)?;
                    let mut steps = path;
                    steps.extend(tail);
                    Ok((steps, lasso))
                } else {
                    Ok((path, None))
                }
            }
            Property::BoundCompare(slot, k) => {
                let desugared = Property::Globally(Box::new(Property::Atom(Expr::Cmp(
                    CmpOp::Lt,
                    Box::new(Expr::Pre(*slot)),
                    Box::new(Expr::Lit(Value::Rat(k.clone()))),
                ))));
                self.build_fail(&desugared, u)
            }
        }
    }
}
