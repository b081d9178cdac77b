//! Randomized differential suites: each fast decider against its brute-force oracle.

use anyhow::Result;
use rand::Rng;
use serde::Serialize;

use unambig::baseline::{classify, has_eda, is_unambiguous};
use unambig::generate::{
    random_ov, random_progressions, random_trim_nfa, random_trim_unary_graph, random_weighted_graph, rng,
};
use unambig::oracles::{
    naive_class, naive_dp_disjoint, naive_intersection, naive_ov, naive_unary_twins, repeated_walk_length,
};
use unambig::progressions::disjoint_progressions;
use unambig::reductions::{expand_wildcards, ie2_to_unambiguity, kov_to_kie, unambiguity_to_eda};
use unambig::twins::unary_twins;
use unambig::unary::{unary_classify, unary_is_unambiguous};

pub const SUITES: [&str; 6] = ["general", "unary", "unary-graph", "progressions", "twins", "reductions"];

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub mismatches: usize,
    /// Seed of the first failing case.
    pub first_failure: Option<u64>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.mismatches == 0
    }
}

/// Runs `suite` on `cases` instances. Case `i` uses the seed `seed + i`.
pub fn run_suite(suite: &str, seed: u64, cases: usize) -> Result<SuiteReport> {
    let check: fn(u64) -> Result<bool> = match suite {
        "general" => general,
        "unary" => unary,
        "unary-graph" => unary_graph,
        "progressions" => progressions,
        "twins" => twins,
        "reductions" => reductions,
        _ => anyhow::bail!("unknown suite `{suite}`, expected one of {} or all", SUITES.join(", ")),
    };
    let mut mismatches = 0;
    let mut first_failure = None;
    for i in 0..cases as u64 {
        let s = seed.wrapping_add(i);
        if !check(s)? {
            mismatches += 1;
            first_failure.get_or_insert(s);
        }
    }
    Ok(SuiteReport { suite: suite.to_string(), cases, mismatches, first_failure })
}

fn general(seed: u64) -> Result<bool> {
    let a = random_trim_nfa(&mut rng(seed), 6, 2);
    let v = classify(&a);
    Ok(v.class == naive_class(&a)? && v.replays(&a))
}

fn unary(seed: u64) -> Result<bool> {
    let a = random_trim_nfa(&mut rng(seed), 8, 1);
    let fast = unary_classify(&a)?;
    Ok(fast.class == classify(&a).class && fast.replays(&a))
}

fn unary_graph(seed: u64) -> Result<bool> {
    let g = random_trim_unary_graph(&mut rng(seed), 40, 1.6);
    let n = g.num_vertices();
    let (ok, walks) = unary_is_unambiguous(&g);
    let expected = repeated_walk_length(&g, 3 * n * n + 3 * n).is_none();
    Ok(ok == expected && walks.is_none_or(|w| w.replays(&g)))
}

fn progressions(seed: u64) -> Result<bool> {
    let mut r = rng(seed);
    let total = r.gen_range(1..=50);
    let inst = random_progressions(&mut r, total);
    Ok(disjoint_progressions(&inst).0 == naive_dp_disjoint(&inst)?)
}

fn twins(seed: u64) -> Result<bool> {
    let g = random_weighted_graph(&mut rng(seed), 12, 5);
    let (ok, w) = unary_twins(&g);
    Ok(ok == naive_unary_twins(&g)? && w.is_none_or(|w| w.replays(&g)))
}

fn reductions(seed: u64) -> Result<bool> {
    let mut r = rng(seed);
    let (n, d) = (r.gen_range(1..=6), r.gen_range(1..=5));
    let ov = random_ov(&mut r, 2, n, d, 0.5);
    let dfas: Vec<_> = kov_to_kie(&ov).iter().map(expand_wildcards).collect();
    let expected = naive_ov(&ov)?;
    let union = ie2_to_unambiguity(&dfas[0], &dfas[1])?;
    Ok(naive_intersection(&dfas)? == expected
        && !is_unambiguous(&union).0 == expected
        && has_eda(&unambiguity_to_eda(&union)).0 == expected)
}
