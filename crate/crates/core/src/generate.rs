//! Seeded random instances for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{trim_graph, StGraph};
use crate::nfa::{trim, Nfa};
use crate::progressions::{gcd, ProgressionsInstance};
use crate::reductions::{LayeredGraph, OvInstance};

pub type Rng64 = ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each possible transition present with probability `density`; random non-empty
/// initial and final sets.
pub fn random_nfa(rng: &mut impl Rng, n: usize, sigma: usize, density: f64) -> Nfa {
    let mut t = Vec::new();
    for p in 0..n {
        for a in 0..sigma {
            for q in 0..n {
                if rng.gen_bool(density) {
                    t.push((p, a, q));
                }
            }
        }
    }
    let mut initial: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
    initial.push(rng.gen_range(0..n));
    let mut finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
    finals.push(rng.gen_range(0..n));
    Nfa::new(n, sigma, t, initial, finals).expect("ids in range")
}

/// A random NFA with at most `max_states` states, trimmed, with a non-empty language.
pub fn random_trim_nfa(rng: &mut impl Rng, max_states: usize, sigma: usize) -> Nfa {
    loop {
        let n = rng.gen_range(1..=max_states);
        let density = rng.gen_range(0.05..0.45);
        let t = trim(&random_nfa(rng, n, sigma, density)).nfa;
        if t.num_states() > 0 {
            return t;
        }
    }
}

/// A DFA with a single initial state 0; each (state, symbol) has a successor with
/// probability `density`.
pub fn random_dfa(rng: &mut impl Rng, n: usize, sigma: usize, density: f64) -> Nfa {
    let mut t = Vec::new();
    for p in 0..n {
        for a in 0..sigma {
            if rng.gen_bool(density) {
                t.push((p, a, rng.gen_range(0..n)));
            }
        }
    }
    let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    Nfa::new(n, sigma, t, [0], finals).expect("ids in range")
}

/// `m` random edges on `n` vertices, `s = 0`, `t = n - 1`.
pub fn random_unary_graph(rng: &mut impl Rng, n: usize, m: usize) -> StGraph {
    let edges: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    StGraph::new(n, edges, 0, n - 1).expect("ids in range")
}

/// Trim part of a random graph with at most `max_vertices` vertices and about
/// `edge_factor` edges per vertex; never empty.
pub fn random_trim_unary_graph(rng: &mut impl Rng, max_vertices: usize, edge_factor: f64) -> StGraph {
    loop {
        let n = rng.gen_range(2..=max_vertices.max(2));
        let m = ((n as f64) * rng.gen_range(0.5..edge_factor)).ceil() as usize;
        if let Some(t) = trim_graph(&random_unary_graph(rng, n, m)) {
            return t.graph;
        }
    }
}

/// Random graph with integer weights in `-max_weight..=max_weight`; sparse so that the
/// number of simple cycles stays small.
pub fn random_weighted_graph(rng: &mut impl Rng, max_vertices: usize, max_weight: i64) -> StGraph {
    let n = rng.gen_range(2..=max_vertices.max(2));
    let m = rng.gen_range(n..=(5 * n / 2).max(n));
    // A few weight values make equal averages, hence twins, common.
    let spread = rng.gen_range(0..=max_weight);
    let edges: Vec<(usize, usize, i64)> =
        (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(-spread..=spread))).collect();
    let mut seen = std::collections::HashSet::new();
    let edges: Vec<_> = edges.into_iter().filter(|e| seen.insert((e.0, e.1))).collect();
    StGraph::new_weighted(n, edges, 0, n - 1).expect("ids in range")
}

/// Distinct random steps with total at most `max_total`, each with a random non-empty
/// base set.
pub fn random_progressions(rng: &mut impl Rng, max_total: u64) -> ProgressionsInstance {
    let mut entries = Vec::new();
    let mut total = 0;
    let mut steps: Vec<u64> = (1..=max_total.max(1)).collect();
    steps.shuffle(rng);
    for b in steps {
        if total + b > max_total || (!entries.is_empty() && rng.gen_bool(0.25)) {
            continue;
        }
        total += b;
        let mut bases: Vec<u64> = (0..b).filter(|_| rng.gen_bool(0.3)).collect();
        if bases.is_empty() {
            bases.push(rng.gen_range(0..b));
        }
        entries.push((b, bases));
    }
    entries.sort_unstable();
    ProgressionsInstance::new(entries).expect("steps distinct, bases in range")
}

/// A disjoint instance with total step at most `max_total` (and at least 1): all steps
/// are multiples of a modulus `M` and each entry uses its own residue class modulo `M`.
pub fn disjoint_progressions_instance(rng: &mut impl Rng, max_total: u64) -> ProgressionsInstance {
    let modulus = ((2 * max_total) as f64).cbrt().ceil().max(1.0) as u64;
    let mut residues: Vec<u64> = (0..modulus).collect();
    residues.shuffle(rng);
    let mut factors: Vec<u64> = (1..=modulus.max(2)).collect();
    factors.shuffle(rng);
    let mut entries = Vec::new();
    let mut total = 0;
    for (&r, &c) in residues.iter().zip(&factors) {
        let b = modulus * c;
        if total + b > max_total {
            continue;
        }
        total += b;
        let mut bases: Vec<u64> = (0..c).filter(|_| rng.gen_bool(0.5)).map(|x| r + x * modulus).collect();
        if bases.is_empty() {
            bases.push(r);
        }
        entries.push((b, bases));
    }
    if entries.is_empty() {
        entries.push((max_total.max(1), vec![0]));
    }
    entries.sort_unstable();
    ProgressionsInstance::new(entries).expect("steps distinct, bases in range")
}

/// [`disjoint_progressions_instance`] with one base added in the residue class of a
/// base of another entry, so that two progressions meet. The new base differs from
/// every existing base, so no two loop-free walks of its graph have equal length and
/// only the progressions solver sees the collision. Returns `None` when the instance
/// has fewer than two entries or no such base exists.
pub fn colliding_progressions_instance(rng: &mut impl Rng, max_total: u64) -> Option<ProgressionsInstance> {
    let inst = disjoint_progressions_instance(rng, max_total);
    let mut entries = inst.entries().to_vec();
    if entries.len() < 2 {
        return None;
    }
    let i = rng.gen_range(1..entries.len());
    let j = rng.gen_range(0..i);
    let g = gcd(entries[i].0, entries[j].0);
    let used: std::collections::HashSet<u64> = entries.iter().flat_map(|e| e.1.iter().copied()).collect();
    let r = (entries[j].1[0] % g..entries[i].0).step_by(g as usize).find(|r| !used.contains(r))?;
    entries[i].1.push(r);
    entries[i].1.sort_unstable();
    ProgressionsInstance::new(entries).ok()
}

/// Distinct positive integers with sum exactly `total`.
pub fn random_distinct_sum(rng: &mut impl Rng, total: u64) -> Vec<u64> {
    let cap = ((total as f64).sqrt() as u64 * 4).max(1);
    let mut chosen = std::collections::BTreeSet::new();
    let mut left = total;
    while left > 0 {
        let x = rng.gen_range(1..=cap.min(left));
        if chosen.insert(x) {
            left -= x;
        } else {
            // Adding the rest to the largest element keeps the elements distinct.
            let top = chosen.pop_last().expect("x is in the set");
            chosen.insert(top + left);
            left = 0;
        }
    }
    chosen.into_iter().collect()
}

pub fn random_ov(rng: &mut impl Rng, k: usize, n: usize, d: usize, p_one: f64) -> OvInstance {
    let sets = (0..k).map(|_| (0..n).map(|_| (0..d).map(|_| rng.gen_bool(p_one)).collect()).collect()).collect();
    OvInstance::new(k, d, sets).expect("shape matches")
}

pub fn random_layered(rng: &mut impl Rng, k: usize, n: usize, p_edge: f64) -> LayeredGraph {
    let mut edges = Vec::new();
    for l in 0..k {
        for i in 0..n {
            for j in 0..n {
                if rng.gen_bool(p_edge) {
                    edges.push((l, i, j));
                }
            }
        }
    }
    LayeredGraph::new(k, n, edges).expect("ids in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::progressions::disjoint_progressions;

    #[test]
    fn distinct_sum_is_exact() {
        let mut r = rng(1);
        for total in [1, 2, 3, 10, 1000, 12345] {
            let a = random_distinct_sum(&mut r, total);
            assert_eq!(a.iter().sum::<u64>(), total);
            assert!(a.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn generated_progressions_have_the_promised_answer() {
        let mut r = rng(2);
        for _ in 0..50 {
            let total = r.gen_range(1..500);
            assert!(disjoint_progressions(&disjoint_progressions_instance(&mut r, total)).0);
            if let Some(c) = colliding_progressions_instance(&mut r, total) {
                assert!(!disjoint_progressions(&c).0);
            }
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let a = random_trim_nfa(&mut rng(7), 6, 2);
        let b = random_trim_nfa(&mut rng(7), 6, 2);
        assert_eq!(a, b);
    }
}
