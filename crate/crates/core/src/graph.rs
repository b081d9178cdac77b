//! Directed st-graphs, compressed adjacency, strongly connected components and walks.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::nfa::{Nfa, WeightedAutomaton};

/// A directed graph with source `s` and target `t`. Self-loops are allowed, parallel
/// edges are not. Edges are kept sorted, so `weights` (when present) aligns with them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StGraph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    s: usize,
    t: usize,
    weights: Option<Vec<i64>>,
}

impl StGraph {
    pub fn new(
        num_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        s: usize,
        t: usize,
    ) -> Result<StGraph> {
        let mut edges: Vec<(usize, usize)> = edges.into_iter().collect();
        check_ids(num_vertices, edges.iter().copied(), s, t)?;
        sort_by_source(num_vertices, &mut edges, |e| e.0);
        edges.dedup();
        Ok(StGraph { num_vertices, edges, s, t, weights: None })
    }

    pub fn new_weighted(
        num_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize, i64)>,
        s: usize,
        t: usize,
    ) -> Result<StGraph> {
        let mut edges: Vec<(usize, usize, i64)> = edges.into_iter().collect();
        check_ids(num_vertices, edges.iter().map(|e| (e.0, e.1)), s, t)?;
        sort_by_source(num_vertices, &mut edges, |e| e.0);
        edges.dedup();
        if let Some(w) = edges.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return invalid(format!("edge ({},{}) has two weights", w[0].0, w[0].1));
        }
        Ok(StGraph {
            num_vertices,
            edges: edges.iter().map(|e| (e.0, e.1)).collect(),
            s,
            t,
            weights: Some(edges.iter().map(|e| e.2).collect()),
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn weights(&self) -> Option<&[i64]> {
        self.weights.as_deref()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u, v)).is_ok()
    }

    /// Weight of `(u, v)`; 0 for an unweighted graph, `None` if the edge is absent.
    pub fn edge_weight(&self, u: usize, v: usize) -> Option<i64> {
        let i = self.edges.binary_search(&(u, v)).ok()?;
        Some(self.weights.as_ref().map_or(0, |w| w[i]))
    }

    /// `(u, v, weight)` triples; weight 0 when unweighted.
    pub fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.edges.iter().enumerate().map(|(i, &(u, v))| (u, v, self.weights.as_ref().map_or(0, |w| w[i])))
    }

    pub fn out_csr(&self) -> Csr {
        Csr::from_edges(self.num_vertices, self.edges.iter().copied())
    }

    pub fn in_csr(&self) -> Csr {
        Csr::from_edges(self.num_vertices, self.edges.iter().map(|&(u, v)| (v, u)))
    }

    pub fn is_walk(&self, walk: &[usize]) -> bool {
        !walk.is_empty()
            && walk.iter().all(|&v| v < self.num_vertices)
            && walk.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }

    pub fn is_st_walk(&self, walk: &[usize]) -> bool {
        self.is_walk(walk) && walk[0] == self.s && walk[walk.len() - 1] == self.t
    }

    /// Total weight of a walk, or `None` if it is not a walk.
    pub fn walk_weight(&self, walk: &[usize]) -> Option<i128> {
        if !self.is_walk(walk) {
            return None;
        }
        walk.windows(2).map(|w| self.edge_weight(w[0], w[1]).map(i128::from)).sum()
    }

    /// Same graph with every edge reversed and `s`, `t` swapped.
    pub fn reversed(&self) -> StGraph {
        match &self.weights {
            None => StGraph::new(self.num_vertices, self.edges.iter().map(|&(u, v)| (v, u)), self.t, self.s),
            Some(_) => StGraph::new_weighted(
                self.num_vertices,
                self.weighted_edges().map(|(u, v, w)| (v, u, w)),
                self.t,
                self.s,
            ),
        }
        .expect("reversal keeps ids in range")
    }

    /// The underlying unary automaton: one state per vertex, initial `s`, final `t`.
    pub fn to_nfa(&self) -> Nfa {
        Nfa::new(self.num_vertices, 1, self.edges.iter().map(|&(u, v)| (u, 0, v)), [self.s], [self.t])
            .expect("ids in range")
    }

    pub fn to_weighted_automaton(&self) -> WeightedAutomaton {
        WeightedAutomaton::new(
            self.num_vertices,
            1,
            self.weighted_edges().map(|(u, v, w)| (u, 0, v, w)),
            [self.s],
            [self.t],
        )
        .expect("ids in range")
    }
}

/// Sorts edges in `O(n + m)` plus the cost of sorting each out-neighbourhood: a
/// counting pass on the source, then a small sort per source.
fn sort_by_source<T: Copy + Ord>(n: usize, edges: &mut Vec<T>, source: impl Fn(&T) -> usize) {
    if edges.is_sorted() {
        return;
    }
    if edges.len() < 64 {
        edges.sort_unstable();
        return;
    }
    let mut start = vec![0usize; n + 1];
    for e in edges.iter() {
        start[source(e) + 1] += 1;
    }
    for v in 0..n {
        start[v + 1] += start[v];
    }
    let mut fill = start.clone();
    let mut sorted = edges.clone();
    for &e in edges.iter() {
        let u = source(&e);
        sorted[fill[u]] = e;
        fill[u] += 1;
    }
    for v in 0..n {
        sorted[start[v]..start[v + 1]].sort_unstable();
    }
    *edges = sorted;
}

fn check_ids(n: usize, mut edges: impl Iterator<Item = (usize, usize)>, s: usize, t: usize) -> Result<()> {
    if s >= n || t >= n {
        return invalid(format!("source {s} or target {t} out of range for {n} vertices"));
    }
    if let Some((u, v)) = edges.find(|&(u, v)| u >= n || v >= n) {
        return invalid(format!("edge ({u},{v}) out of range for {n} vertices"));
    }
    Ok(())
}

/// Projects a unary automaton in normal form onto its st-graph.
pub fn to_st_graph(a: &Nfa) -> Result<StGraph> {
    if !a.is_unary() {
        return invalid(format!("expected a unary automaton, alphabet size is {}", a.alphabet_size()));
    }
    if !a.is_normal_form() {
        return invalid("expected exactly one initial and one final state");
    }
    StGraph::new(a.num_states(), a.transitions().iter().map(|&(p, _, q)| (p, q)), a.initial()[0], a.finals()[0])
}

/// Weighted counterpart of [`to_st_graph`].
pub fn to_weighted_st_graph(w: &WeightedAutomaton) -> Result<StGraph> {
    let g = to_st_graph(w.nfa())?;
    StGraph::new_weighted(g.num_vertices(), w.weighted_transitions().map(|(p, _, q, x)| (p, q, x)), g.s(), g.t())
}

/// Compressed sparse row adjacency.
#[derive(Clone, Debug)]
pub struct Csr {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Csr {
    pub fn from_edges(n: usize, edges: impl Iterator<Item = (usize, usize)> + Clone) -> Csr {
        let mut offsets = vec![0usize; n + 1];
        for (u, _) in edges.clone() {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; offsets[n]];
        for (u, v) in edges {
            targets[fill[u]] = v;
            fill[u] += 1;
        }
        Csr { offsets, targets }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

/// Strongly connected components. Component ids follow Tarjan's completion order,
/// so every edge between distinct components goes from a higher to a lower id.
#[derive(Clone, Debug)]
pub struct Scc {
    pub comp: Vec<usize>,
    pub count: usize,
}

impl Scc {
    /// Vertices of each component, in increasing id order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); self.count];
        for (v, &c) in self.comp.iter().enumerate() {
            m[c].push(v);
        }
        m
    }
}

/// Iterative Tarjan.
pub fn tarjan(adj: &Csr) -> Scc {
    let n = adj.len();
    const NONE: usize = usize::MAX;
    let mut index = vec![NONE; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![NONE; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next_index = 0;
    let mut count = 0;
    for root in 0..n {
        if index[root] != NONE {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let nb = adj.neighbors(v);
            if *pos < nb.len() {
                let w = nb[*pos];
                *pos += 1;
                if index[w] == NONE {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    Scc { comp, count }
}

/// BFS shortest walk from `from` to any vertex with `is_target`, using only vertices
/// accepted by `allowed`. Returns the vertex sequence.
pub fn shortest_walk(
    adj: &Csr,
    from: usize,
    mut is_target: impl FnMut(usize) -> bool,
    mut allowed: impl FnMut(usize) -> bool,
) -> Option<Vec<usize>> {
    if is_target(from) {
        return Some(vec![from]);
    }
    let mut parent = vec![usize::MAX; adj.len()];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &v in adj.neighbors(u) {
            if parent[v] != usize::MAX || !allowed(v) {
                continue;
            }
            parent[v] = u;
            if is_target(v) {
                let mut walk = vec![v];
                let mut x = v;
                while x != from {
                    x = parent[x];
                    walk.push(x);
                }
                walk.reverse();
                return Some(walk);
            }
            queue.push_back(v);
        }
    }
    None
}

/// Result of [`trim_graph`].
#[derive(Clone, Debug)]
pub struct TrimmedGraph {
    pub graph: StGraph,
    pub old_of_new: Vec<usize>,
}

impl TrimmedGraph {
    pub fn lift(&self, walk: &[usize]) -> Vec<usize> {
        walk.iter().map(|&v| self.old_of_new[v]).collect()
    }
}

/// Keeps the vertices lying on some st-walk. `None` when there is no st-walk at all.
pub fn trim_graph(g: &StGraph) -> Option<TrimmedGraph> {
    let n = g.num_vertices();
    let fwd = reach_csr(&g.out_csr(), g.s());
    let bwd = reach_csr(&g.in_csr(), g.t());
    if !fwd[g.t()] {
        return None;
    }
    let mut new_of_old = vec![usize::MAX; n];
    let mut old_of_new = Vec::new();
    for v in 0..n {
        if fwd[v] && bwd[v] {
            new_of_old[v] = old_of_new.len();
            old_of_new.push(v);
        }
    }
    if old_of_new.len() == n {
        return Some(TrimmedGraph { graph: g.clone(), old_of_new });
    }
    let keep = |&(u, v, _): &(usize, usize, i64)| new_of_old[u] != usize::MAX && new_of_old[v] != usize::MAX;
    let kept = g.weighted_edges().filter(keep).map(|(u, v, w)| (new_of_old[u], new_of_old[v], w));
    let (s, t) = (new_of_old[g.s()], new_of_old[g.t()]);
    let graph = if g.is_weighted() {
        StGraph::new_weighted(old_of_new.len(), kept, s, t)
    } else {
        StGraph::new(old_of_new.len(), kept.map(|(u, v, _)| (u, v)), s, t)
    }
    .expect("trim keeps ids in range");
    Some(TrimmedGraph { graph, old_of_new })
}

pub(crate) fn reach_csr(adj: &Csr, from: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    seen[from] = true;
    let mut stack = vec![from];
    while let Some(u) = stack.pop() {
        for &v in adj.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}
