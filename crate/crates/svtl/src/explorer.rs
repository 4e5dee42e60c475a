//! Breadth-first state-space exploration with hash-consed states.
//!
//! States are interned by structural equality, which is sound because every
//! variable is a function of the trace: two traces landing on the same tuple
//! agree on every variable from then on, so one node can stand for all of
//! them. Node ids are dense and assigned in discovery order; successor events
//! are enumerated in lexicographic order; two explorations of the same model
//! therefore produce identical graphs, byte for byte.
//!
//! Exploration is bounded by [`ExploreLimits`]. A node cut off by a limit is
//! left unexpanded (a frontier node) and the graph is marked incomplete;
//! downstream checks treat frontier nodes as unknown territory rather than
//! dead ends.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::kernel::{Event, Model, StateTuple, StepError, Trace};

/// Exploration bounds. `max_states` is soft: the last expanded node may push
/// the count past it by its out-degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExploreLimits {
    pub max_states: usize,
    pub max_depth: usize,
}

impl Default for ExploreLimits {
    fn default() -> Self {
        ExploreLimits {
            max_states: 100_000,
            max_depth: 10_000,
        }
    }
}

impl ExploreLimits {
    pub fn with_max_states(mut self, n: usize) -> Self {
        self.max_states = n;
        self
    }

    pub fn with_max_depth(mut self, n: usize) -> Self {
        self.max_depth = n;
        self
    }
}

/// The explored transition graph.
#[derive(Debug, Clone)]
pub struct TransitionGraph {
    nodes: Vec<StateTuple>,
    edges: Vec<Vec<(Event, usize)>>,
    expanded: Vec<bool>,
    depth: Vec<usize>,
    /// BFS discovery parent: (node, event). None for the root.
    parent: Vec<Option<(usize, Event)>>,
    index: HashMap<StateTuple, usize>,
    complete: bool,
}

impl TransitionGraph {
    pub const ROOT: usize = 0;

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> &StateTuple {
        &self.nodes[id]
    }

    pub fn edges(&self, id: usize) -> &[(Event, usize)] {
        &self.edges[id]
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn depth(&self, id: usize) -> usize {
        self.depth[id]
    }

    /// Whether `id`'s successors were computed.
    pub fn is_expanded(&self, id: usize) -> bool {
        self.expanded[id]
    }

    /// An unexpanded node at the exploration horizon.
    pub fn is_frontier(&self, id: usize) -> bool {
        !self.expanded[id]
    }

    /// A node known to have no defined events at all.
    pub fn is_dead_end(&self, id: usize) -> bool {
        self.expanded[id] && self.edges[id].is_empty()
    }

    /// True when every discovered node was expanded: the graph is the whole
    /// reachable state space.
    pub fn complete(&self) -> bool {
        self.complete
    }

    /// Shallowest unexpanded depth, if the graph is incomplete.
    pub fn frontier_depth(&self) -> Option<usize> {
        (0..self.len())
            .filter(|&i| !self.expanded[i])
            .map(|i| self.depth[i])
            .min()
    }

    /// Dense id of a state, if it was discovered.
    pub fn node_id(&self, s: &StateTuple) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Events along the BFS discovery path from the root to `id` (shortest).
    pub fn path_from_root(&self, id: usize) -> Vec<(Event, usize)> {
        let mut rev = Vec::new();
        let mut cur = id;
        while let Some((p, e)) = &self.parent[cur] {
            rev.push((e.clone(), cur));
            cur = *p;
        }
        rev.reverse();
        rev
    }
}

/// Explore the reachable state space of `model` from its initial state.
pub fn explore(model: &Model, limits: ExploreLimits) -> Result<TransitionGraph, StepError> {
    let init = model.init_state();
    let mut g = TransitionGraph {
        nodes: vec![init.clone()],
        edges: vec![Vec::new()],
        expanded: vec![false],
        depth: vec![0],
        parent: vec![None],
        index: HashMap::from([(init, 0)]),
        complete: false,
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(&u) = queue.front() {
        if g.nodes.len() >= limits.max_states {
            break;
        }
        queue.pop_front();
        let events = model.defined_events(&g.nodes[u])?;
        if g.depth[u] >= limits.max_depth {
            if events.is_empty() {
                // Nothing beyond this node; expanding adds no edges, so the
                // depth cut does not make the graph incomplete here.
                g.expanded[u] = true;
            }
            continue;
        }
        for e in events {
            let target = model.step_unchecked(&g.nodes[u], &e)?;
            let id = match g.index.get(&target) {
                Some(&id) => id,
                None => {
                    let id = g.nodes.len();
                    g.index.insert(target.clone(), id);
                    g.nodes.push(target);
                    g.edges.push(Vec::new());
                    g.expanded.push(false);
                    g.depth.push(g.depth[u] + 1);
                    g.parent.push(Some((u, e.clone())));
                    queue.push_back(id);
                    id
                }
            };
            g.edges[u].push((e, id));
        }
        g.expanded[u] = true;
    }
    g.complete = g.expanded.iter().all(|&b| b);
    Ok(g)
}

/// The avoiding region contains a cycle, so path lengths are unbounded.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("avoiding paths are unbounded: the avoiding region contains a cycle")]
pub struct CyclicPath;

/// Length (in edges) of the longest path from `s` that stays on nodes where
/// `p` is false. Counting stops on reaching a `p`-node or a dead end; a cycle
/// in the avoiding region means no finite bound exists.
pub fn longest_avoiding_path(
    graph: &TransitionGraph,
    s: usize,
    p: impl Fn(usize) -> bool,
) -> Result<usize, CyclicPath> {
    if p(s) {
        return Ok(0);
    }
    // Iterative DFS. 0 = unvisited, 1 = on stack, 2 = finished.
    let n = graph.len();
    let mut color = vec![0u8; n];
    let mut f = vec![0usize; n];
    let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
    color[s] = 1;
    while let Some(&mut (u, ref mut ci)) = stack.last_mut() {
        let edges = graph.edges(u);
        if *ci < edges.len() {
            let t = edges[*ci].1;
            *ci += 1;
            if p(t) {
                continue;
            }
            match color[t] {
                0 => {
                    color[t] = 1;
                    stack.push((t, 0));
                }
                1 => return Err(CyclicPath),
                _ => {}
            }
        } else {
            f[u] = if edges.is_empty() {
                0
            } else {
                1 + edges
                    .iter()
                    .map(|&(_, t)| if p(t) { 0 } else { f[t] })
                    .max()
                    .unwrap()
            };
            color[u] = 2;
            stack.pop();
        }
    }
    Ok(f[s])
}

/// What kind of witness to extract.
#[derive(Debug, Clone)]
pub enum WitnessKind<'a> {
    /// Shortest trace from the root to this node.
    ToNode(usize),
    /// Shortest trace from the root to a node with no defined events.
    ToDeadEnd,
    /// Shortest trace from the root onto a cycle, plus one turn around it.
    /// With `restrict`, the cycle must stay on nodes where the slice is true.
    Lasso { restrict: Option<&'a [bool]> },
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("no witness of the requested kind exists in the explored graph")]
pub struct NoWitness;

/// A concrete witness: the events, the node ids visited (excluding the
/// root), and the stem/cycle split when the witness is a lasso.
#[derive(Debug, Clone)]
pub struct Witness {
    pub trace: Trace,
    pub nodes: Vec<usize>,
    pub lasso: Option<LassoShape>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LassoShape {
    pub stem_len: usize,
    pub cycle_len: usize,
}

pub fn find_witness(graph: &TransitionGraph, kind: WitnessKind<'_>) -> Result<Witness, NoWitness> {
    match kind {
        WitnessKind::ToNode(id) => {
            if id >= graph.len() {
                return Err(NoWitness);
            }
            Ok(witness_from_steps(graph.path_from_root(id), None))
        }
        WitnessKind::ToDeadEnd => {
            // Ids are in BFS order, so the first dead end is a shallowest one.
            let id = (0..graph.len())
                .find(|&i| graph.is_dead_end(i))
                .ok_or(NoWitness)?;
            Ok(witness_from_steps(graph.path_from_root(id), None))
        }
        WitnessKind::Lasso { restrict } => {
            let allowed = |i: usize| restrict.map_or(true, |r| r[i]);
            let cyclic = cyclic_nodes(graph, &allowed);
            let entry = (0..graph.len())
                .find(|&i| cyclic[i])
                .ok_or(NoWitness)?;
            let stem = graph.path_from_root(entry);
            let cycle = shortest_cycle_through(graph, entry, &allowed).ok_or(NoWitness)?;
            let shape = LassoShape {
                stem_len: stem.len(),
                cycle_len: cycle.len(),
            };
            let mut steps = stem;
            steps.extend(cycle);
            Ok(witness_from_steps(steps, Some(shape)))
        }
    }
}

fn witness_from_steps(steps: Vec<(Event, usize)>, lasso: Option<LassoShape>) -> Witness {
    let (events, nodes): (Vec<Event>, Vec<usize>) = steps.into_iter().unzip();
    Witness {
        trace: Trace::new(events),
        nodes,
        lasso,
    }
}

/// Nodes lying on a cycle of the subgraph induced by `allowed`.
pub(crate) fn cyclic_nodes(graph: &TransitionGraph, allowed: &dyn Fn(usize) -> bool) -> Vec<bool> {
    // Iterative Tarjan SCC over the induced subgraph.
    let n = graph.len();
    let mut idx = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut scc_stack: Vec<usize> = Vec::new();
    let mut cyclic = vec![false; n];
    let mut counter = 0usize;
    for start in 0..n {
        if !allowed(start) || idx[start] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(start, 0)];
        idx[start] = counter;
        low[start] = counter;
        counter += 1;
        on_stack[start] = true;
        scc_stack.push(start);
        while let Some(&mut (u, ref mut ci)) = call.last_mut() {
            let edges = graph.edges(u);
            if *ci < edges.len() {
                let t = edges[*ci].1;
                *ci += 1;
                if !allowed(t) {
                    continue;
                }
                if idx[t] == usize::MAX {
                    idx[t] = counter;
                    low[t] = counter;
                    counter += 1;
                    on_stack[t] = true;
                    scc_stack.push(t);
                    call.push((t, 0));
                } else if on_stack[t] {
                    low[u] = low[u].min(idx[t]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[u]);
                }
                if low[u] == idx[u] {
                    let mut members = Vec::new();
                    loop {
                        let w = scc_stack.pop().unwrap();
                        on_stack[w] = false;
                        members.push(w);
                        if w == u {
                            break;
                        }
                    }
                    let in_cycle = members.len() > 1
                        || graph
                            .edges(u)
                            .iter()
                            .any(|&(_, t)| t == u && allowed(u));
                    if in_cycle {
                        for w in members {
                            cyclic[w] = true;
                        }
                    }
                }
            }
        }
    }
    cyclic
}

/// Shortest nonempty cycle from `c` back to `c` inside the allowed set.
fn shortest_cycle_through(
    graph: &TransitionGraph,
    c: usize,
    allowed: &dyn Fn(usize) -> bool,
) -> Option<Vec<(Event, usize)>> {
    bfs_path(graph, c, |t| t == c, allowed, true)
}

/// Deterministic BFS for a path from `from` to the first node satisfying
/// `target`, moving only through `allowed` nodes. With `nonempty`, a
/// zero-length path does not count (used for cycles through a node).
pub(crate) fn bfs_path(
    graph: &TransitionGraph,
    from: usize,
    target: impl Fn(usize) -> bool,
    allowed: &dyn Fn(usize) -> bool,
    nonempty: bool,
) -> Option<Vec<(Event, usize)>> {
    if !nonempty && target(from) {
        return Some(Vec::new());
    }
    let n = graph.len();
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; n]; // (prev node, edge idx)
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for (ei, &(_, t)) in graph.edges(u).iter().enumerate() {
            if !allowed(t) {
                continue;
            }
            if target(t) {
                // Reconstruct path ending with this edge.
                let mut rev = vec![(u, ei)];
                let mut cur = u;
                while let Some((p, pe)) = pred[cur] {
                    rev.push((p, pe));
                    cur = p;
                }
                rev.reverse();
                return Some(
                    rev.into_iter()
                        .map(|(p, pe)| {
                            let (e, t) = &graph.edges(p)[pe];
                            (e.clone(), *t)
                        })
                        .collect(),
                );
            }
            if !seen[t] {
                seen[t] = true;
                pred[t] = Some((u, ei));
                queue.push_back(t);
            }
        }
    }
    None
}

/// Render the graph in Graphviz DOT form. Node labels show the selected
/// slots (all slots when `None`); frontier nodes are dashed, the root is
/// double-bordered. Output is stable across runs.
pub fn export_dot(model: &Model, graph: &TransitionGraph, selected: Option<&[usize]>) -> String {
    let mut out = String::from("digraph model {\n  rankdir=LR;\n  node [shape=box fontname=\"monospace\"];\n");
    for i in 0..graph.len() {
        let label = format!("{}\\n{}", i, escape(&model.format_state(graph.node(i), selected)));
        let mut attrs = format!("label=\"{label}\"");
        if i == TransitionGraph::ROOT {
            attrs.push_str(" peripheries=2");
        }
        if graph.is_frontier(i) {
            attrs.push_str(" style=dashed");
        }
        out.push_str(&format!("  n{i} [{attrs}];\n"));
    }
    for u in 0..graph.len() {
        for (e, t) in graph.edges(u) {
            out.push_str(&format!("  n{u} -> n{t} [label=\"{}\"];\n", escape(&e.to_string())));
        }
    }
    out.push_str("}\n");
    out
}

/// Plain text dump: header, one node per line, then edges.
pub fn dump_text(model: &Model, graph: &TransitionGraph, selected: Option<&[usize]>) -> String {
    let mut out = String::new();
    out.push_str(&format!("nodes: {}\n", graph.len()));
    out.push_str(&format!("edges: {}\n", graph.num_edges()));
    out.push_str(&format!("complete: {}\n", graph.complete()));
    for i in 0..graph.len() {
        let marker = if graph.is_frontier(i) { " [frontier]" } else { "" };
        out.push_str(&format!(
            "node {i} depth {}: {}{}\n",
            graph.depth(i),
            model.format_state(graph.node(i), selected),
            marker
        ));
    }
    for u in 0..graph.len() {
        for (e, t) in graph.edges(u) {
            out.push_str(&format!("{u} -{e}-> {t}\n"));
        }
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
