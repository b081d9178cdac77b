//! Cycle structure of unary st-graphs: disjointness of cycles, EDA and IDA.

use std::collections::VecDeque;

use crate::graph::{shortest_walk, tarjan, trim_graph, Csr, Scc, StGraph};

use super::EqualLengthWalks;

const NONE: usize = usize::MAX;

/// Components of a graph classified as trivial, simple cycle, or richer.
pub(crate) struct Components {
    pub scc: Scc,
    pub members: Vec<Vec<usize>>,
    /// Edges with both endpoints in the component.
    pub internal: Vec<usize>,
}

impl Components {
    pub fn new(g: &StGraph, adj: &Csr) -> Components {
        let scc = tarjan(adj);
        let members = scc.members();
        let mut internal = vec![0; scc.count];
        for &(u, v) in g.edges() {
            if scc.comp[u] == scc.comp[v] {
                internal[scc.comp[u]] += 1;
            }
        }
        Components { scc, members, internal }
    }

    /// A component with at least one internal edge.
    pub fn is_cyclic(&self, c: usize) -> bool {
        self.internal[c] > 0
    }

    /// Strongly connected with as many edges as vertices: a simple cycle.
    pub fn is_simple_cycle(&self, c: usize) -> bool {
        self.internal[c] == self.members[c].len()
    }

    /// For each component, some other cyclic component with a walk into it.
    pub fn cyclic_source(&self, adj: &Csr) -> Vec<usize> {
        let mut src = vec![NONE; self.scc.count];
        // Edges go from higher to lower component ids.
        for c in (0..self.scc.count).rev() {
            let give = if self.is_cyclic(c) { c } else { src[c] };
            if give == NONE {
                continue;
            }
            for &u in &self.members[c] {
                for &w in adj.neighbors(u) {
                    let d = self.scc.comp[w];
                    if d != c && src[d] == NONE {
                        src[d] = give;
                    }
                }
            }
        }
        src
    }
}

/// The simple cycles of a graph whose cycles are pairwise disjoint.
pub(crate) struct Cycles {
    /// Vertices of each cycle in walking order, starting at the smallest id.
    pub cycles: Vec<Vec<usize>>,
    /// Index into `cycles`, or `usize::MAX` for vertices on no cycle.
    pub cycle_of: Vec<usize>,
}

/// On a trim graph: either the disjoint simple cycles, or two equal-length st-walks
/// showing that some cycle shares a vertex with another or some walk joins two cycles.
pub(crate) fn disjoint_cycles(g: &StGraph) -> Result<Cycles, EqualLengthWalks> {
    let adj = g.out_csr();
    let comps = Components::new(g, &adj);
    for c in 0..comps.scc.count {
        if comps.is_cyclic(c) && !comps.is_simple_cycle(c) {
            return Err(shared_vertex_walks(g, &adj, &comps, c));
        }
    }
    let src = comps.cyclic_source(&adj);
    for c in 0..comps.scc.count {
        if comps.is_cyclic(c) && src[c] != NONE {
            return Err(joined_cycles_walks(g, &adj, &comps, src[c], c));
        }
    }
    let n = g.num_vertices();
    let mut cycle_of = vec![NONE; n];
    let mut cycles = Vec::new();
    for c in (0..comps.scc.count).filter(|&c| comps.is_cyclic(c)) {
        let start = comps.members[c][0];
        let mut cycle = vec![start];
        let mut v = start;
        loop {
            v = *adj
                .neighbors(v)
                .iter()
                .find(|&&w| comps.scc.comp[w] == c)
                .expect("cycle vertex has an internal successor");
            if v == start {
                break;
            }
            cycle.push(v);
        }
        for &v in &cycle {
            cycle_of[v] = cycles.len();
        }
        cycles.push(cycle);
    }
    Ok(Cycles { cycles, cycle_of })
}

fn path_between(adj: &Csr, from: usize, to: usize, allowed: impl FnMut(usize) -> bool) -> Vec<usize> {
    shortest_walk(adj, from, |v| v == to, allowed).expect("target is reachable")
}

fn concat(parts: &[&[usize]]) -> Vec<usize> {
    let mut out: Vec<usize> = parts[0].to_vec();
    for p in &parts[1..] {
        debug_assert_eq!(out.last(), p.first());
        out.extend_from_slice(&p[1..]);
    }
    out
}

/// Component `c` holds two distinct simple cycles through one vertex `x`; the walks
/// go around them in both orders.
fn shared_vertex_walks(g: &StGraph, adj: &Csr, comps: &Components, c: usize) -> EqualLengthWalks {
    let (x, c1, c2) = shared_loops(adj, comps, c);
    let head = path_between(adj, g.s(), x, |_| true);
    let tail = path_between(adj, x, g.t(), |_| true);
    EqualLengthWalks { walks: [concat(&[&head, &c1, &c2, &tail]), concat(&[&head, &c2, &c1, &tail])] }
}

/// A walk leads from cycle component `c1` to cycle component `c2`. With a connecting
/// walk `p ~> q`, the walks `p c1^|c2| (p ~> q)` and `(p ~> q) c2^|c1|` have equal length.
fn joined_cycles_walks(g: &StGraph, adj: &Csr, comps: &Components, c1: usize, c2: usize) -> EqualLengthWalks {
    let comp = &comps.scc.comp;
    let bridge = multi_source_path(adj, &comps.members[c1], |v| comp[v] == c2);
    let (p, q) = (bridge[0], *bridge.last().unwrap());
    let loop_at = |v: usize, c: usize| {
        let mut cyc = vec![v];
        let mut u = v;
        loop {
            u = *adj.neighbors(u).iter().find(|&&w| comp[w] == c).unwrap();
            cyc.push(u);
            if u == v {
                return cyc;
            }
        }
    };
    let (cyc1, cyc2) = (loop_at(p, c1), loop_at(q, c2));
    let repeat = |cyc: &[usize], times: usize| {
        let mut w = vec![cyc[0]];
        for _ in 0..times {
            w.extend_from_slice(&cyc[1..]);
        }
        w
    };
    let (l1, l2) = (cyc1.len() - 1, cyc2.len() - 1);
    let head = path_between(adj, g.s(), p, |_| true);
    let tail = path_between(adj, q, g.t(), |_| true);
    let loops1 = repeat(&cyc1, l2);
    let loops2 = repeat(&cyc2, l1);
    EqualLengthWalks { walks: [concat(&[&head, &loops1, &bridge, &tail]), concat(&[&head, &bridge, &loops2, &tail])] }
}

/// Shortest walk from any of `sources` to a vertex with `is_target`.
pub(crate) fn multi_source_path(adj: &Csr, sources: &[usize], is_target: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut parent = vec![NONE; adj.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        parent[s] = s;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        for &v in adj.neighbors(u) {
            if parent[v] != NONE {
                continue;
            }
            parent[v] = u;
            if is_target(v) {
                let mut walk = vec![v];
                let mut x = v;
                while parent[x] != x {
                    x = parent[x];
                    walk.push(x);
                }
                walk.reverse();
                return walk;
            }
            queue.push_back(v);
        }
    }
    panic!("no walk from the sources to a target")
}

/// On a trim graph: a vertex `x` with two distinct simple cycles through it, as closed
/// walks starting and ending at `x`.
pub(crate) fn eda_cycles(g: &StGraph) -> Option<(usize, Vec<usize>, Vec<usize>)> {
    let adj = g.out_csr();
    let comps = Components::new(g, &adj);
    let c = (0..comps.scc.count).find(|&c| comps.is_cyclic(c) && !comps.is_simple_cycle(c))?;
    Some(shared_loops(&adj, &comps, c))
}

fn shared_loops(adj: &Csr, comps: &Components, c: usize) -> (usize, Vec<usize>, Vec<usize>) {
    let comp = &comps.scc.comp;
    let inside = |v: usize| comp[v] == c;
    let x = *comps.members[c]
        .iter()
        .find(|&&v| adj.neighbors(v).iter().filter(|&&w| inside(w)).count() >= 2)
        .expect("more edges than vertices forces a branching vertex");
    let mut out = adj.neighbors(x).iter().copied().filter(|&w| inside(w));
    let (y1, y2) = (out.next().unwrap(), out.next().unwrap());
    let cycle_via = |y: usize| {
        let mut cyc = vec![x];
        if y != x {
            cyc.extend(path_between(adj, y, x, inside));
        } else {
            cyc.push(x);
        }
        cyc
    };
    (x, cycle_via(y1), cycle_via(y2))
}

/// On a trim graph without EDA: states `p != q` on two cycles joined by a walk, a length
/// `L >= 1`, and walks `p -> p`, `p -> q`, `q -> q` of exactly `L` edges.
pub(crate) fn ida_walks(g: &StGraph) -> Option<(usize, usize, [Vec<usize>; 3])> {
    let adj = g.out_csr();
    let comps = Components::new(g, &adj);
    let src = comps.cyclic_source(&adj);
    let c2 = (0..comps.scc.count).find(|&c| comps.is_cyclic(c) && src[c] != NONE)?;
    let c1 = src[c2];
    let comp = &comps.scc.comp;
    let bridge = multi_source_path(&adj, &comps.members[c1], |v| comp[v] == c2);
    let (p0, q) = (bridge[0], *bridge.last().unwrap());
    let d = bridge.len() - 1;
    let cycle_from = |v: usize, c: usize| {
        let mut cyc = vec![v];
        let mut u = v;
        loop {
            u = *adj.neighbors(u).iter().find(|&&w| comp[w] == c).unwrap();
            if u == v {
                return cyc;
            }
            cyc.push(u);
        }
    };
    let cyc1 = cycle_from(p0, c1);
    let cyc2 = cycle_from(q, c2);
    let (l1, l2) = (cyc1.len(), cyc2.len());
    // Start r steps before p0 so that r + d is a multiple of l1.
    let r = (l1 - d % l1) % l1;
    let p = cyc1[(l1 - r) % l1];
    let period = l1 * l2;
    let len = period * (r + d).div_ceil(period);
    let around = |cyc: &[usize], start: usize, steps: usize| -> Vec<usize> {
        (0..=steps).map(|i| cyc[(start + i) % cyc.len()]).collect()
    };
    let pp = around(&cyc1, (l1 - r) % l1, len);
    let mut pq = around(&cyc1, (l1 - r) % l1, len - d);
    pq.extend_from_slice(&bridge[1..]);
    let qq = around(&cyc2, 0, len);
    Some((p, q, [pp, pq, qq]))
}

/// Whether the trim part of `g` has pairwise disjoint cycles and no walk between two
/// of them.
pub fn check_disjoint_cycles(g: &StGraph) -> bool {
    match trim_graph(g) {
        None => true,
        Some(t) => disjoint_cycles(&t.graph).is_ok(),
    }
}

/// Some vertex of the trim part lies on two distinct cycles.
pub fn unary_has_eda(g: &StGraph) -> bool {
    let Some(t) = trim_graph(g) else { return false };
    let g = &t.graph;
    let comps = Components::new(g, &g.out_csr());
    (0..comps.scc.count).any(|c| comps.is_cyclic(c) && !comps.is_simple_cycle(c))
}

/// EDA, or a walk in the trim part between two distinct cycles.
pub fn unary_has_ida(g: &StGraph) -> bool {
    let Some(t) = trim_graph(g) else { return false };
    let g = &t.graph;
    let adj = g.out_csr();
    let comps = Components::new(g, &adj);
    if (0..comps.scc.count).any(|c| comps.is_cyclic(c) && !comps.is_simple_cycle(c)) {
        return true;
    }
    let src = comps.cyclic_source(&adj);
    (0..comps.scc.count).any(|c| comps.is_cyclic(c) && src[c] != NONE)
}
