//! Timing harness for the near-linear deciders. Instances are generated from a seed,
//! each algorithm runs several times per size, and the CSV output is identical between
//! runs except for the `millis` column.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::generate::{colliding_progressions_instance, disjoint_progressions_instance, rng};
use crate::graph::StGraph;
use crate::progressions::{gcd_sum, ProgressionsInstance};
use crate::twins::unary_twins;
use crate::unary::{progressions_to_graph, unary_decide, unary_has_eda, unary_has_ida};

pub const CSV_HEADER: &str = "algo,family,n,m,millis,verdict,extra";

/// Longest cycle used by the cycle-chain families.
const MAX_CYCLE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// Graphs of disjoint progressions instances: unambiguous.
    UnaryDisjoint,
    /// The same with one colliding base: ambiguous.
    UnaryCollision,
    /// Cycles joined one after the other: no EDA.
    EdaChain,
    /// Cycles on parallel s-t branches: no IDA.
    IdaParallel,
    /// Weighted cycle chain where every cycle has the same average weight: twins.
    TwinsChain,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::UnaryDisjoint, Family::UnaryCollision, Family::EdaChain, Family::IdaParallel, Family::TwinsChain];

    pub fn name(self) -> &'static str {
        match self {
            Family::UnaryDisjoint => "unary-disjoint",
            Family::UnaryCollision => "unary-collision",
            Family::EdaChain => "eda-chain",
            Family::IdaParallel => "ida-parallel",
            Family::TwinsChain => "twins-chain",
        }
    }

    pub fn algorithm(self) -> &'static str {
        match self {
            Family::UnaryDisjoint | Family::UnaryCollision => "unary_decide",
            Family::EdaChain => "unary_has_eda",
            Family::IdaParallel => "unary_has_ida",
            Family::TwinsChain => "unary_twins",
        }
    }

    /// Largest accepted median doubling ratio: near-linear for unambiguity, linear
    /// for the rest.
    pub fn ratio_limit(self) -> f64 {
        match self {
            Family::UnaryDisjoint | Family::UnaryCollision => 2.6,
            _ => 2.3,
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match Family::ALL.iter().find(|f| f.name() == s) {
            Some(&f) => Ok(f),
            None => {
                let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
                invalid(format!("unknown family `{s}`, expected one of {}", names.join(", ")))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub algo: String,
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub millis: f64,
    pub verdict: String,
    pub extra: String,
}

/// A generated instance and the statistics reported with it.
struct Instance {
    graph: StGraph,
    extra: String,
}

fn progressions_instance(inst: &ProgressionsInstance) -> Instance {
    let steps: Vec<u64> = inst.entries().iter().map(|e| e.0).collect();
    Instance { graph: progressions_to_graph(inst), extra: format!("steps={};gcd_sum={}", steps.len(), gcd_sum(&steps)) }
}

/// Random cycle lengths in `1..=MAX_CYCLE` with total at least `n`.
fn cycle_lengths(r: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut lens = Vec::new();
    let mut total = 0;
    while total < n {
        let l = r.gen_range(1..=MAX_CYCLE);
        lens.push(l);
        total += l;
    }
    lens
}

/// `s -> C_1 -> ... -> C_k -> t`, entering and leaving each cycle at its first vertex.
/// With `average`, cycle weights average to it and links get arbitrary weights.
fn cycle_chain(r: &mut impl Rng, n: usize, average: Option<i64>) -> StGraph {
    let lens = cycle_lengths(r, n);
    let total: usize = lens.iter().sum();
    let (s, t) = (0, total + 1);
    let mut edges: Vec<(usize, usize, i64)> = Vec::with_capacity(total + lens.len() + 1);
    let mut prev = s;
    let mut first = 1;
    for &l in &lens {
        edges.push((prev, first, r.gen_range(-5..=5)));
        let lambda = average.unwrap_or(0);
        let mut offsets: Vec<i64> = (0..l).map(|_| r.gen_range(-3..=3)).collect();
        let drift: i64 = offsets.iter().sum();
        offsets[0] -= drift;
        for j in 0..l {
            edges.push((first + j, first + (j + 1) % l, lambda + offsets[j]));
        }
        prev = first;
        first += l;
    }
    edges.push((prev, t, 0));
    if average.is_some() {
        StGraph::new_weighted(total + 2, edges, s, t).expect("ids in range")
    } else {
        StGraph::new(total + 2, edges.into_iter().map(|e| (e.0, e.1)), s, t).expect("ids in range")
    }
}

/// `s -> C_i -> t` for every cycle, through a short path before each cycle.
fn parallel_cycles(r: &mut impl Rng, n: usize) -> StGraph {
    let lens = cycle_lengths(r, n);
    let mut edges = Vec::new();
    let (s, t) = (0, 1);
    let mut next = 2;
    for &l in &lens {
        let path = r.gen_range(0..3);
        let mut prev = s;
        for _ in 0..path {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, next));
        for j in 0..l {
            edges.push((next + j, next + (j + 1) % l));
        }
        edges.push((next + r.gen_range(0..l), t));
        next += l;
    }
    StGraph::new(next, edges, s, t).expect("ids in range")
}

fn generate(family: Family, n: usize, seed: u64) -> Instance {
    let mut r = rng(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let plain = |graph| Instance { graph, extra: String::new() };
    match family {
        Family::UnaryDisjoint => progressions_instance(&disjoint_progressions_instance(&mut r, n as u64)),
        Family::UnaryCollision => loop {
            if let Some(inst) = colliding_progressions_instance(&mut r, n as u64) {
                break progressions_instance(&inst);
            }
        },
        Family::EdaChain => plain(cycle_chain(&mut r, n, None)),
        Family::IdaParallel => plain(parallel_cycles(&mut r, n)),
        Family::TwinsChain => {
            let average = r.gen_range(-3..=3);
            plain(cycle_chain(&mut r, n, Some(average)))
        }
    }
}

fn run(family: Family, g: &StGraph) -> bool {
    match family {
        Family::UnaryDisjoint | Family::UnaryCollision => unary_decide(g).unambiguous,
        Family::EdaChain => unary_has_eda(g),
        Family::IdaParallel => unary_has_ida(g),
        Family::TwinsChain => unary_twins(g).0,
    }
}

/// Runs `family` at every size, `runs` times each, one record per run.
pub fn run_family(family: Family, sizes: &[usize], runs: usize, seed: u64) -> Vec<BenchRecord> {
    let mut out = Vec::with_capacity(sizes.len() * runs);
    for &n in sizes {
        let inst = generate(family, n, seed);
        for i in 0..runs {
            let start = Instant::now();
            let verdict = run(family, &inst.graph);
            let millis = start.elapsed().as_secs_f64() * 1e3;
            let sep = if inst.extra.is_empty() { "" } else { ";" };
            out.push(BenchRecord {
                algo: family.algorithm().to_string(),
                family: family.name().to_string(),
                n: inst.graph.num_vertices(),
                m: inst.graph.num_edges(),
                millis,
                verdict: verdict.to_string(),
                extra: format!("size={n};run={i}{sep}{}", inst.extra),
            });
        }
    }
    out
}

/// Powers of two from `2^lo` to `2^hi`.
pub fn doubling_sizes(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|e| 1usize << e).collect()
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(out, "{},{},{},{},{:.3},{},{}", r.algo, r.family, r.n, r.m, r.millis, r.verdict, r.extra).unwrap();
    }
    out
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        (v[k / 2 - 1] + v[k / 2]) / 2.0
    }
}

/// Median time per requested size, in order of first appearance. The size is read from
/// the `size=` entry of `extra`.
pub fn median_times(records: &[BenchRecord]) -> Vec<(usize, f64)> {
    let mut sizes: Vec<usize> = Vec::new();
    let mut times: Vec<Vec<f64>> = Vec::new();
    for r in records {
        let size =
            r.extra.split(';').find_map(|kv| kv.strip_prefix("size=")).and_then(|v| v.parse().ok()).unwrap_or(r.n);
        match sizes.iter().position(|&s| s == size) {
            Some(i) => times[i].push(r.millis),
            None => {
                sizes.push(size);
                times.push(vec![r.millis]);
            }
        }
    }
    sizes.into_iter().zip(times.into_iter().map(median)).collect()
}

/// `time(2n) / time(n)` for consecutive sizes, with times floored at a microsecond.
pub fn doubling_ratios(medians: &[(usize, f64)]) -> Vec<(usize, f64)> {
    medians.windows(2).map(|w| (w[1].0, w[1].1.max(1e-3) / w[0].1.max(1e-3))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub family: String,
    pub ratios: Vec<(usize, f64)>,
    /// Median of the last `top` ratios.
    pub median_ratio: f64,
    pub limit: f64,
    pub pass: bool,
}

pub fn scaling_report(family: Family, records: &[BenchRecord], top: usize) -> ScalingReport {
    let ratios = doubling_ratios(&median_times(records));
    let tail: Vec<f64> = ratios.iter().rev().take(top).map(|r| r.1).collect();
    let median_ratio = if tail.is_empty() { f64::NAN } else { median(tail) };
    let limit = family.ratio_limit();
    ScalingReport { family: family.name().to_string(), ratios, median_ratio, limit, pass: median_ratio <= limit }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_have_the_expected_verdicts() {
        for family in Family::ALL {
            let recs = run_family(family, &[64, 128], 1, 3);
            let expect =
                family != Family::UnaryCollision && family != Family::EdaChain && family != Family::IdaParallel;
            assert!(recs.iter().all(|r| r.verdict == expect.to_string()), "{family:?}: {recs:?}");
            assert_eq!(family.name().parse::<Family>().unwrap(), family);
        }
    }

    #[test]
    fn csv_is_stable_apart_from_times() {
        let strip = |s: String| -> Vec<String> {
            s.lines().map(|l| l.split(',').enumerate().filter(|(i, _)| *i != 4).map(|(_, x)| x).collect()).collect()
        };
        let a = to_csv(&run_family(Family::TwinsChain, &[32, 64], 2, 9));
        let b = to_csv(&run_family(Family::TwinsChain, &[32, 64], 2, 9));
        assert_eq!(strip(a.clone()), strip(b));
        assert!(a.starts_with(CSV_HEADER));
    }

    #[test]
    fn ratios_of_synthetic_times() {
        let m = vec![(1, 1.0), (2, 2.0), (4, 4.4)];
        let r = doubling_ratios(&m);
        assert_eq!(r[0], (2, 2.0));
        assert!((r[1].1 - 2.2).abs() < 1e-9);
    }
}
