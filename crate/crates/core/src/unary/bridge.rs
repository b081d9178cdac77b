//! Translation between unary st-graphs and arithmetic progressions.

use crate::graph::{trim_graph, StGraph};
use crate::progressions::{gcd, Collision, ProgressionsInstance};

use super::cycles::disjoint_cycles;
use super::dag::boundary_lengths;
use super::gate::{on_one_cycle, transform};
use super::{EqualLengthWalks, SPARSITY_FACTOR};

/// One simple cycle of length `b` per entry, entered from `s` at its vertex 0 and left
/// towards `t` from its vertex `a` for every base `a`. Each progression element
/// `a + x*b` becomes an st-walk of length `a + x*b + 2`.
///
/// Vertex 0 is `s`, vertex 1 is `t`, then the cycles in entry order.
pub fn progressions_to_graph(inst: &ProgressionsInstance) -> StGraph {
    let n = 2 + inst.total_step() as usize;
    let mut edges = Vec::with_capacity(n + inst.num_progressions());
    let mut first = 2;
    for (b, bases) in inst.entries() {
        let b = *b as usize;
        edges.push((0, first));
        for j in 0..b {
            edges.push((first + j, first + (j + 1) % b));
        }
        for &a in bases {
            edges.push((first + a as usize, 1));
        }
        first += b;
    }
    StGraph::new(n, edges, 0, 1).expect("ids in range")
}

/// A progressions instance equivalent to the unambiguity of a unary graph.
#[derive(Clone, Debug)]
pub struct UnaryInstance {
    pub instance: ProgressionsInstance,
    /// For each entry, aligned with its sorted bases: the length of the loop-free
    /// st-walk whose residue the base is.
    pub walk_lengths: Vec<Vec<u64>>,
}

impl UnaryInstance {
    /// Length of two distinct st-walks in the graph, given a collision of the instance.
    pub fn collision_length(&self, c: &Collision) -> u128 {
        let entries = self.instance.entries();
        let lookup = |(i, a): (usize, u64)| {
            let k = entries[i].1.binary_search(&a).expect("collision base is a base");
            (entries[i].0 as u128, self.walk_lengths[i][k] as u128)
        };
        let (bi, pi) = lookup(c.first);
        let (bj, pj) = lookup(c.second);
        let lcm = bi / gcd(bi as u64, bj as u64) as u128 * bj;
        let lo = pi.max(pj);
        let mut v = c.value;
        if v < lo {
            v += (lo - v).div_ceil(lcm) * lcm;
        }
        v
    }
}

#[derive(Clone, Debug)]
pub enum ProgressionsOutcome {
    Unambiguous,
    /// Two st-walks of length `length` exist, explicitly given in `walks` when the
    /// cycle check produced them. `length` is `None` when only a size guard fired.
    Ambiguous {
        length: Option<u128>,
        walks: Option<EqualLengthWalks>,
    },
    Instance(UnaryInstance),
}

/// Reduces a unary graph to a progressions instance, or decides it on the way.
/// Walks and lengths refer to the trimmed graph with ids of `g`.
pub fn unary_to_progressions(g: &StGraph) -> ProgressionsOutcome {
    let Some(t) = trim_graph(g) else { return ProgressionsOutcome::Unambiguous };
    match reduce_trimmed(&t.graph, true) {
        ProgressionsOutcome::Ambiguous { length, walks } => {
            ProgressionsOutcome::Ambiguous { length, walks: walks.map(|w| w.lift(&t.old_of_new)) }
        }
        other => other,
    }
}

/// Core of the reduction on a trim graph. With `guards` off, an ambiguous answer always
/// carries a length.
pub(crate) fn reduce_trimmed(g: &StGraph, guards: bool) -> ProgressionsOutcome {
    use ProgressionsOutcome::*;
    let n = g.num_vertices();
    if guards && g.num_edges() > SPARSITY_FACTOR * n {
        return Ambiguous { length: None, walks: None };
    }
    let cycles = match disjoint_cycles(g) {
        Err(w) => return Ambiguous { length: Some(w.length() as u128), walks: Some(w) },
        Ok(c) => c,
    };
    if on_one_cycle(&cycles, g.s(), g.t()) {
        return Unambiguous;
    }
    let cg = transform(g, &cycles);

    // Acyclic part: drop the non-gate cycle vertices and the cycle edges.
    const NONE: usize = usize::MAX;
    let big = cg.graph.num_vertices();
    let mut on_cycle = vec![NONE; big];
    for (c, cyc) in cg.cycles.iter().enumerate() {
        for &v in cyc {
            on_cycle[v] = c;
        }
    }
    let mut h_of = vec![NONE; big];
    let mut count = 0;
    for v in 0..big {
        let dropped = on_cycle[v] != NONE && cg.cycles[on_cycle[v]][0] != v;
        if !dropped {
            h_of[v] = count;
            count += 1;
        }
    }
    let h_edges = cg.graph.edges().iter().filter_map(|&(u, v)| {
        let cycle_edge = on_cycle[u] != NONE && on_cycle[u] == on_cycle[v];
        (!cycle_edge).then(|| (h_of[u], h_of[v]))
    });
    let h = StGraph::new(count, h_edges, h_of[g.s()], h_of[g.t()]).expect("ids in range");
    let mut marked = vec![false; count];
    for &gate in &cg.gates {
        marked[h_of[gate]] = true;
    }

    let forward = match boundary_lengths(&h, &marked, guards).expect("acyclic") {
        Ok(sets) => sets,
        Err(l) => return Ambiguous { length: l.map(|l| l as u128), walks: None },
    };
    if cg.gates.is_empty() {
        return Unambiguous;
    }
    let backward = match boundary_lengths(&h.reversed(), &marked, guards).expect("acyclic") {
        Ok(sets) => sets,
        Err(l) => return Ambiguous { length: l.map(|l| l as u128), walks: None },
    };

    // Loop-free lengths through each gate, grouped by cycle length.
    let longest = cg.cycles.iter().map(Vec::len).max().unwrap_or(0);
    let mut per_size: Vec<Vec<u64>> = vec![Vec::new(); longest + 1];
    let mut through_gate = vec![false; count + 1];
    for (c, &gate) in cg.gates.iter().enumerate() {
        let b = cg.cycles[c].len();
        let hg = h_of[gate];
        let to_t = forward.full[hg].as_ref().expect("gates are boundary vertices");
        let from_s = backward.full[hg].as_ref().expect("gates are boundary vertices");
        let mut lengths = Vec::with_capacity(to_t.len() * from_s.len());
        for &x in from_s {
            for &y in to_t {
                lengths.push((x + y) as u64);
                through_gate[(x + y) as usize] = true;
            }
        }
        per_size[b].extend(lengths);
    }
    let by_size: Vec<(usize, Vec<u64>)> = per_size.into_iter().enumerate().filter(|(_, l)| !l.is_empty()).collect();

    // Two loop-free walks through cycles of one size with equal residues.
    let max_b = by_size.last().map_or(0, |e| e.0);
    let mut owner = vec![NONE; max_b];
    let mut stamp = vec![0u32; max_b];
    let mut entries = Vec::with_capacity(by_size.len());
    let mut walk_lengths = Vec::with_capacity(by_size.len());
    for (round, (b, lengths)) in by_size.iter().enumerate() {
        let b = *b;
        let mut pairs = Vec::with_capacity(lengths.len());
        for (k, &p) in lengths.iter().enumerate() {
            let r = (p % b as u64) as usize;
            if stamp[r] == round as u32 + 1 {
                let other = lengths[owner[r]];
                return Ambiguous { length: Some(p.max(other) as u128), walks: None };
            }
            stamp[r] = round as u32 + 1;
            owner[r] = k;
            pairs.push((r as u64, p));
        }
        pairs.sort_unstable();
        entries.push((b as u64, pairs.iter().map(|x| x.0).collect::<Vec<u64>>()));
        walk_lengths.push(pairs.iter().map(|x| x.1).collect::<Vec<u64>>());
    }

    // Walks avoiding all cycles against the progressions.
    let avoiding: Vec<u32> = forward.p_st.iter().copied().filter(|&l| !through_gate[l as usize]).collect();
    if let Some(&top) = avoiding.iter().max() {
        let mut hit = vec![false; top as usize + 1];
        for &l in &avoiding {
            hit[l as usize] = true;
        }
        for (b, lengths) in &by_size {
            for &p in lengths {
                let mut v = p as usize + b;
                while v <= top as usize {
                    if hit[v] {
                        return Ambiguous { length: Some(v as u128), walks: None };
                    }
                    v += b;
                }
            }
        }
    }

    let instance = ProgressionsInstance::new(entries).expect("residues are distinct and in range");
    Instance(UnaryInstance { instance, walk_lengths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn two_cycle_branches_reduce_to_known_instance() {
        match unary_to_progressions(&fixtures::two_cycle_branches(false)) {
            ProgressionsOutcome::Instance(u) => {
                assert_eq!(u.instance, fixtures::two_cycle_progressions());
            }
            other => panic!("expected an instance, got {other:?}"),
        }
    }

    #[test]
    fn graph_from_instance_has_expected_shape() {
        let g = progressions_to_graph(&fixtures::two_cycle_progressions());
        assert_eq!(g.num_vertices(), 7);
        assert_eq!(g.num_edges(), 2 + 5 + 3);
        let single = ProgressionsInstance::new(vec![(1, vec![0])]).unwrap();
        let g = progressions_to_graph(&single);
        assert!(g.has_edge(2, 2));
    }

    #[test]
    fn acyclic_graph_is_decided_without_instance() {
        assert!(matches!(unary_to_progressions(&fixtures::shortcut_chain()), ProgressionsOutcome::Unambiguous));
    }
}
