//! Twins property of unary weighted automata in linear time.
//!
//! A trim weighted st-graph has two non-twin siblings iff it has two cycles of different
//! average weight. Fix one cycle `pi` of length `l` and weight `W` and reweight every
//! edge to `l*w - W`; then `pi` weighs 0 and every cycle has average `avg(pi)` iff all
//! reweighted cycles weigh 0, which holds iff every strongly connected component
//! carries a potential.

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::{shortest_walk, tarjan, trim_graph, Csr, Scc, StGraph};

/// A closed walk `cycle[0] -> ... -> cycle[last] = cycle[0]`, taken `repeat` times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepeatedCycle {
    pub cycle: Vec<usize>,
    pub repeat: u64,
}

impl RepeatedCycle {
    /// Number of edges after unrolling.
    pub fn length(&self) -> u128 {
        (self.cycle.len() as u128 - 1) * self.repeat as u128
    }
}

/// Siblings `p`, `q` reached from `s` by walks of equal length, with cycles of equal
/// length but different weight. `p` and `q` may coincide when the graph is ambiguous.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonTwinSiblings {
    pub p: usize,
    pub q: usize,
    pub walks: [Vec<usize>; 2],
    pub cycles: [RepeatedCycle; 2],
}

impl NonTwinSiblings {
    pub fn replays(&self, g: &StGraph) -> bool {
        let ends = [self.p, self.q];
        let walks_ok = self.walks[0].len() == self.walks[1].len()
            && self.walks.iter().zip(ends).all(|(w, v)| g.is_walk(w) && w[0] == g.s() && w[w.len() - 1] == v);
        let cycles_ok = self.cycles.iter().zip(ends).all(|(c, v)| {
            c.cycle.len() >= 2 && g.is_walk(&c.cycle) && c.cycle[0] == v && c.cycle[c.cycle.len() - 1] == v
        });
        if !walks_ok || !cycles_ok || self.cycles[0].length() != self.cycles[1].length() {
            return false;
        }
        let total = |c: &RepeatedCycle| {
            let w: BigInt = c.cycle.windows(2).map(|e| BigInt::from(g.edge_weight(e[0], e[1]).unwrap_or(0))).sum();
            w * BigInt::from(c.repeat)
        };
        total(&self.cycles[0]) != total(&self.cycles[1])
    }
}

/// Integer arithmetic used by the scan: `i128` first, big integers if that overflows.
trait Num: Clone + PartialEq + Zero + CheckedAdd + CheckedSub + CheckedMul + From<i64> {}
impl Num for i128 {}
impl Num for BigInt {}

/// Edge index ranges per source vertex; edges of a graph are sorted by source.
fn edge_starts(g: &StGraph) -> Vec<usize> {
    let mut start = vec![0usize; g.num_vertices() + 1];
    for &(u, _) in g.edges() {
        start[u + 1] += 1;
    }
    for v in 0..g.num_vertices() {
        start[v + 1] += start[v];
    }
    start
}

fn base_weights(g: &StGraph) -> Vec<i64> {
    g.weights().map_or_else(|| vec![0; g.num_edges()], <[i64]>::to_vec)
}

/// Some cycle of `g` as a closed walk, or `None` if `g` is acyclic.
fn find_cycle(g: &StGraph, adj: &Csr, scc: &Scc) -> Option<Vec<usize>> {
    let mut size = vec![0usize; scc.count];
    for &c in &scc.comp {
        size[c] += 1;
    }
    for &(u, v) in g.edges() {
        if u == v {
            return Some(vec![u, u]);
        }
    }
    let root = (0..g.num_vertices()).find(|&v| size[scc.comp[v]] > 1)?;
    let c = scc.comp[root];
    // Shortest walk from a successor of root (inside the component) back to root.
    let next = *adj.neighbors(root).iter().find(|&&v| scc.comp[v] == c).expect("component edge");
    let mut cycle = vec![root];
    cycle.extend(shortest_walk(adj, next, |v| v == root, |v| scc.comp[v] == c).expect("strongly connected"));
    Some(cycle)
}

/// `l * w - W` for every edge, where the reference cycle has `l` edges and weight `W`.
fn reweight<N: Num>(weights: &[i64], l: usize, total: &N) -> Option<Vec<N>> {
    let l = N::from(l as i64);
    weights.iter().map(|&w| l.checked_mul(&N::from(w))?.checked_sub(total)).collect()
}

fn walk_weight<N: Num>(g: &StGraph, start: &[usize], w: &[N], walk: &[usize]) -> Option<N> {
    let mut sum = N::zero();
    for e in walk.windows(2) {
        let i = start[e[0]] + g.edges()[start[e[0]]..start[e[0] + 1]].binary_search(&(e[0], e[1])).ok()?;
        sum = sum.checked_add(&w[i])?;
    }
    Some(sum)
}

/// Potentials per component, or a closed walk of nonzero weight. `None` on overflow.
fn scan<N: Num>(
    g: &StGraph,
    adj: &Csr,
    scc: &Scc,
    start: &[usize],
    w: &[N],
) -> Option<std::result::Result<Vec<N>, [Vec<usize>; 2]>> {
    let n = g.num_vertices();
    const NONE: usize = usize::MAX;
    let mut phi: Vec<Option<N>> = vec![None; n];
    let mut parent = vec![NONE; n];
    let mut stack = Vec::new();
    for root in 0..n {
        if phi[root].is_some() {
            continue;
        }
        let c = scc.comp[root];
        phi[root] = Some(N::zero());
        stack.push(root);
        while let Some(u) = stack.pop() {
            let pu = phi[u].clone().unwrap();
            for (i, &v) in adj.neighbors(u).iter().enumerate() {
                if scc.comp[v] != c {
                    continue;
                }
                let via = pu.checked_add(&w[start[u] + i])?;
                match &phi[v] {
                    None => {
                        phi[v] = Some(via);
                        parent[v] = u;
                        stack.push(v);
                    }
                    Some(pv) if *pv != via => {
                        return Some(Err(violation(adj, scc, &parent, root, u, v)));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Some(Ok(phi.into_iter().map(Option::unwrap).collect()))
}

/// The closed walks `root ~> v ~> root` (tree walk to `v`) and `root ~> u -> v ~> root`,
/// which differ in weight.
fn violation(adj: &Csr, scc: &Scc, parent: &[usize], root: usize, u: usize, v: usize) -> [Vec<usize>; 2] {
    let tree_path = |mut x: usize| {
        let mut p = vec![x];
        while x != root {
            x = parent[x];
            p.push(x);
        }
        p.reverse();
        p
    };
    let c = scc.comp[root];
    let back = shortest_walk(adj, v, |x| x == root, |x| scc.comp[x] == c).expect("strongly connected");
    let mut first = tree_path(v);
    first.extend_from_slice(&back[1..]);
    let mut second = tree_path(u);
    second.push(v);
    second.extend_from_slice(&back[1..]);
    [first, second]
}

/// Vertex potentials with `phi(v) - phi(u) = w(u, v)` on every edge, or a closed walk
/// of nonzero weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PotentialOutcome {
    Potential(Vec<i128>),
    NonzeroCycle(Vec<usize>),
}

/// Computes a potential of a strongly connected weighted graph from root 0, or finds a
/// cycle of nonzero weight.
pub fn potential_check(g: &StGraph) -> Result<PotentialOutcome> {
    let adj = g.out_csr();
    let scc = tarjan(&adj);
    if scc.count > 1 {
        return invalid("graph is not strongly connected");
    }
    let start = edge_starts(g);
    let w: Vec<i128> = base_weights(g).into_iter().map(i128::from).collect();
    match scan(g, &adj, &scc, &start, &w) {
        None => Err(Error::CapExceeded("potential exceeds 128 bits".into())),
        Some(Ok(phi)) => Ok(PotentialOutcome::Potential(phi)),
        Some(Err(pair)) => {
            let nonzero = pair
                .into_iter()
                .find(|c| walk_weight(g, &start, &w, c) != Some(0))
                .expect("the two walks differ in weight");
            Ok(PotentialOutcome::NonzeroCycle(nonzero))
        }
    }
}

/// Reweights `g` to `l * w(e) - W` for the closed walk `cycle` of `l` edges and weight
/// `W`. Cycles of the result weigh 0 exactly when their average equals that of `cycle`.
pub fn shift_weights(g: &StGraph, cycle: &[usize]) -> Result<StGraph> {
    if cycle.len() < 2 || !g.is_walk(cycle) || cycle[0] != cycle[cycle.len() - 1] {
        return invalid("not a closed walk of the graph");
    }
    let total = g.walk_weight(cycle).expect("valid walk");
    let l = cycle.len() - 1;
    let weights = reweight::<i128>(&base_weights(g), l, &total)
        .ok_or_else(|| Error::CapExceeded("shifted weight exceeds 128 bits".into()))?;
    let edges = g.edges().iter().zip(weights).map(|(&(u, v), w)| {
        i64::try_from(w).map(|w| (u, v, w)).map_err(|_| Error::CapExceeded("shifted weight exceeds 64 bits".into()))
    });
    StGraph::new_weighted(g.num_vertices(), edges.collect::<Result<Vec<_>>>()?, g.s(), g.t())
}

/// Decides whether every pair of siblings of the trimmed graph is a pair of twins.
/// Unweighted graphs count as weight 0 everywhere.
pub fn unary_twins(g: &StGraph) -> (bool, Option<NonTwinSiblings>) {
    let Some(t) = trim_graph(g) else { return (true, None) };
    let h = &t.graph;
    let adj = h.out_csr();
    let scc = tarjan(&adj);
    let Some(reference) = find_cycle(h, &adj, &scc) else { return (true, None) };
    let start = edge_starts(h);
    let base = base_weights(h);
    let l = reference.len() - 1;

    fn run<N: Num>(
        h: &StGraph,
        adj: &Csr,
        scc: &Scc,
        start: &[usize],
        base: &[i64],
        reference: &[usize],
        l: usize,
    ) -> Option<Option<Vec<usize>>> {
        let plain: Vec<N> = base.iter().map(|&w| N::from(w)).collect();
        let total = walk_weight(h, start, &plain, reference)?;
        let w = reweight(base, l, &total)?;
        Some(match scan(h, adj, scc, start, &w)? {
            Ok(_) => None,
            Err(pair) => {
                let mut nonzero = None;
                for c in pair {
                    if walk_weight(h, start, &w, &c)? != N::zero() {
                        nonzero = Some(c);
                        break;
                    }
                }
                Some(nonzero.expect("the two walks differ in weight"))
            }
        })
    }
    let found = run::<i128>(h, &adj, &scc, &start, &base, &reference, l)
        .or_else(|| run::<BigInt>(h, &adj, &scc, &start, &base, &reference, l))
        .expect("big integers do not overflow");
    match found {
        None => (true, None),
        Some(other) => {
            let w = sibling_witness(h, &adj, reference, other);
            let lift = |v: Vec<usize>| t.lift(&v);
            let [c0, c1] = w.cycles;
            let lifted = NonTwinSiblings {
                p: t.old_of_new[w.p],
                q: t.old_of_new[w.q],
                walks: w.walks.map(lift),
                cycles: [
                    RepeatedCycle { cycle: t.lift(&c0.cycle), repeat: c0.repeat },
                    RepeatedCycle { cycle: t.lift(&c1.cycle), repeat: c1.repeat },
                ],
            };
            (false, Some(lifted))
        }
    }
}

/// Rotation of the closed walk `c` to start at index `i`.
fn rotate(c: &[usize], i: usize) -> Vec<usize> {
    let l = c.len() - 1;
    let mut r = c[i..l].to_vec();
    r.extend_from_slice(&c[..=i]);
    r
}

/// Non-twin siblings from two closed walks of different average weight: repeat both to
/// a common length, reach them from `s` by shortest walks and pad the shorter approach
/// along its cycle.
fn sibling_witness(g: &StGraph, adj: &Csr, c1: Vec<usize>, c2: Vec<usize>) -> NonTwinSiblings {
    let n = g.num_vertices();
    let approach = |c: &[usize]| {
        let mut on = vec![false; n];
        for &v in c {
            on[v] = true;
        }
        shortest_walk(adj, g.s(), |v| on[v], |_| true).expect("trim graph reaches every vertex")
    };
    let (mut c1, mut c2) = (c1, c2);
    let (mut r1, mut r2) = (approach(&c1), approach(&c2));
    if r1.len() > r2.len() {
        std::mem::swap(&mut c1, &mut c2);
        std::mem::swap(&mut r1, &mut r2);
    }
    let (l1, l2) = (c1.len() - 1, c2.len() - 1);
    let p1 = *r1.last().unwrap();
    let at = c1.iter().position(|&v| v == p1).unwrap();
    let c1 = rotate(&c1, at);
    let pad = r2.len() - r1.len();
    r1.extend((1..=pad).map(|k| c1[k % l1]));
    let q = *r1.last().unwrap();
    let c1 = rotate(&c1, pad % l1);
    let p2 = *r2.last().unwrap();
    let c2 = rotate(&c2, c2.iter().position(|&v| v == p2).unwrap());
    let g12 = crate::progressions::gcd(l1 as u64, l2 as u64);
    NonTwinSiblings {
        p: q,
        q: p2,
        walks: [r1, r2],
        cycles: [
            RepeatedCycle { cycle: c1, repeat: l2 as u64 / g12 },
            RepeatedCycle { cycle: c2, repeat: l1 as u64 / g12 },
        ],
    }
}
