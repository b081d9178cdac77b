//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test -p unambig --test acceptance -- --nocapture` to see the report.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::Rng;

use unambig::baseline::{classify, has_eda, has_ida, is_unambiguous};
use unambig::bench::{doubling_sizes, run_family, scaling_report, Family};
use unambig::fixtures::{self, HASH};
use unambig::generate::{
    disjoint_progressions_instance, random_distinct_sum, random_layered, random_ov, random_progressions,
    random_trim_nfa, random_trim_unary_graph, random_weighted_graph, rng,
};
use unambig::nfa::{count_runs, trim, Nfa};
use unambig::oracles::{
    enumerate_walk_lengths, naive_class, naive_dp_disjoint, naive_intersection, naive_kcycle, naive_mod_sets, naive_ov,
    naive_twins, naive_unary_twins, repeated_walk_length,
};
use unambig::progressions::{disjoint_progressions, gcd_sum, precompute_mod_sets, sigma0};
use unambig::reductions::{
    expand_wildcards, ie2_to_unambiguity, ie3_to_ida, kcycle_to_2ie, kov_to_kie, unambiguity_to_eda,
    unambiguity_to_twins, GadgetDfa,
};
use unambig::twins::unary_twins;
use unambig::unary::{
    progressions_to_graph, unary_classify, unary_decide, unary_has_eda, unary_has_ida, unary_is_unambiguous,
};
use unambig::witness::AmbiguityClass;

const SEED: u64 = 20_241_019;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(mismatches: &[String], summary: String) -> Outcome {
    let mut detail = summary;
    if let Some(first) = mismatches.first() {
        detail.push_str(&format!("; {} mismatches, first: {first}", mismatches.len()));
    }
    Outcome { pass: mismatches.is_empty(), detail }
}

fn reference_classes() -> Outcome {
    use AmbiguityClass::*;
    let mut bad = Vec::new();
    let expected = [
        (fixtures::a1(), Unambiguous),
        (fixtures::a2(), ExponentiallyAmbiguous),
        (fixtures::a3(), FinitelyAmbiguous),
        (fixtures::a4(), PolynomiallyAmbiguous),
    ];
    for (i, (a, class)) in expected.iter().enumerate() {
        let v = classify(a);
        if v.class != *class || !v.replays(a) {
            bad.push(format!("A{} classified {:?}", i + 1, v.class));
        }
    }
    let a4 = unary_classify(&fixtures::a4()).unwrap();
    if a4.class != PolynomiallyAmbiguous || !a4.replays(&fixtures::a4()) {
        bad.push(format!("unary pipeline gives {:?} on A4", a4.class));
    }
    for n in 1..=5u32 {
        let mut word = Vec::new();
        for _ in 1..n {
            word.extend([0, HASH]);
        }
        word.push(0);
        let runs = count_runs(&fixtures::a2(), &word);
        if runs != BigUint::from(2u32).pow(n) {
            bad.push(format!("A2 has {runs} runs for n = {n}"));
        }
    }
    outcome(&bad, "A1..A4 classes and A2 run counts 2^n for n = 1..5".into())
}

fn general_oracle() -> Outcome {
    let mut r = rng(SEED + 2);
    let mut bad = Vec::new();
    let mut counts = [0usize; 4];
    for i in 0..2000 {
        let a = random_trim_nfa(&mut r, 6, 2);
        let v = classify(&a);
        let expect = naive_class(&a).unwrap();
        counts[expect as usize] += 1;
        if v.class != expect || !v.replays(&a) {
            bad.push(format!("instance {i}: {:?} vs oracle {expect:?}", v.class));
        }
    }
    outcome(&bad, format!("2000 trim NFAs, oracle classes U/F/P/E = {counts:?}"))
}

fn unary_oracle() -> Outcome {
    let mut r = rng(SEED + 3);
    let mut bad = Vec::new();
    let mut unambiguous = 0;
    for i in 0..2000 {
        let factor = r.gen_range(0.8..1.6);
        let g = random_trim_unary_graph(&mut r, 40, factor);
        let n = g.num_vertices();
        let cap = 3 * n * n + 3 * n;
        let expect = repeated_walk_length(&g, cap).is_none();
        if i < 200 && n <= 20 {
            // The saturated count agrees with the exact profile.
            let exact = enumerate_walk_lengths(&g, cap).unwrap().first_repeated();
            if exact != repeated_walk_length(&g, cap) {
                bad.push(format!("instance {i}: saturated and exact walk counts differ"));
            }
        }
        let (ok, w) = unary_is_unambiguous(&g);
        unambiguous += ok as usize;
        if ok != expect {
            bad.push(format!("instance {i} (n = {n}): unambiguous = {ok}, oracle {expect}"));
        }
        if !ok && !w.is_some_and(|w| w.replays(&g)) {
            bad.push(format!("instance {i}: missing or bad walk pair"));
        }
        if unary_decide(&g).unambiguous != ok {
            bad.push(format!("instance {i}: decision without witness differs"));
        }
        let a = g.to_nfa();
        if unary_has_eda(&g) != has_eda(&a).0 {
            bad.push(format!("instance {i}: EDA differs"));
        }
        if unary_has_ida(&g) != has_ida(&a).0 {
            bad.push(format!("instance {i}: IDA differs"));
        }
    }
    outcome(&bad, format!("2000 trim unary graphs, {unambiguous} unambiguous"))
}

fn progressions() -> Outcome {
    let mut r = rng(SEED + 4);
    let mut bad = Vec::new();
    let mut disjoint = 0;
    for i in 0..5000 {
        let total = r.gen_range(1..=50);
        let inst = random_progressions(&mut r, total);
        let (ok, c) = disjoint_progressions(&inst);
        disjoint += ok as usize;
        if ok != naive_dp_disjoint(&inst).unwrap() {
            bad.push(format!("instance {i}: fast {ok}"));
        }
        if let Some(c) = c {
            let e = inst.entries();
            let member =
                |(k, a): (usize, u64)| c.value >= a as u128 && (c.value - a as u128).is_multiple_of(e[k].0 as u128);
            if !member(c.first) || !member(c.second) || c.first.0 == c.second.0 {
                bad.push(format!("instance {i}: collision {c:?} is not common"));
            }
        }
    }
    let fixed = fixtures::two_cycle_progressions();
    let (ok, c) = disjoint_progressions(&fixed);
    if ok || naive_dp_disjoint(&fixed).unwrap() || c.is_none() {
        bad.push("two-cycle instance reported disjoint".into());
    }
    for i in 0..200 {
        let n = r.gen_range(1..=10_000u64);
        let a: Vec<u64> = (0..r.gen_range(1..=50)).map(|_| r.gen_range(0..n)).collect();
        let fast = precompute_mod_sets(&a, n).unwrap();
        for (d, set) in naive_mod_sets(&a, n) {
            if fast.get(d) != Some(set.as_slice()) {
                bad.push(format!("mod sets {i}: divisor {d} of {n} differs"));
            }
        }
    }
    outcome(&bad, format!("5000 instances ({disjoint} disjoint), two-cycle instance, 200 divisor lattices"))
}

fn sparsity() -> Outcome {
    let mut r = rng(SEED + 5);
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let total = r.gen_range(1..=2000);
        let inst = disjoint_progressions_instance(&mut r, total);
        let g = progressions_to_graph(&inst);
        let (n, m) = (g.num_vertices(), g.num_edges());
        worst = worst.max(m as f64 / n as f64);
        if m > 12 * n {
            bad.push(format!("graph {i}: m = {m} > 12 n = {}", 12 * n));
        }
        if !unary_decide(&g).unambiguous {
            bad.push(format!("graph {i}: not unambiguous"));
        }
    }
    outcome(&bad, format!("1000 graphs, largest m/n = {worst:.3}"))
}

fn twins() -> Outcome {
    let mut r = rng(SEED + 6);
    let mut bad = Vec::new();
    let mut twins_count = 0;
    for i in 0..2000 {
        let g = random_weighted_graph(&mut r, 12, 5);
        let (ok, w) = unary_twins(&g);
        twins_count += ok as usize;
        if ok != naive_unary_twins(&g).unwrap() {
            bad.push(format!("graph {i}: fast {ok}"));
        }
        if ok != naive_twins(&g.to_weighted_automaton()).unwrap() {
            bad.push(format!("graph {i}: square-graph oracle disagrees"));
        }
        if !ok && !w.is_some_and(|w| w.replays(&g)) {
            bad.push(format!("graph {i}: missing or bad sibling witness"));
        }
    }
    for (x1, x2, y1, y2) in [(0, 0, 1, 1), (0, 5, 1, 2), (3, -1, -2, -2), (0, 0, 0, 1)] {
        let ok = unary_twins(&fixtures::sibling_gadget(x1, x2, y1, y2)).0;
        if ok != (y1 == y2) {
            bad.push(format!("sibling gadget ({x1},{x2},{y1},{y2}) gives {ok}"));
        }
    }
    for i in 0..500 {
        let a = random_trim_nfa(&mut r, 5, 2);
        let expect = is_unambiguous(&a).0;
        if naive_twins(&unambiguity_to_twins(&a)).unwrap() != expect {
            bad.push(format!("round trip {i}: unambiguous = {expect}"));
        }
    }
    outcome(&bad, format!("2000 weighted graphs ({twins_count} twins), sibling gadget, 500 round trips"))
}

fn trimmed(d: &GadgetDfa) -> Nfa {
    trim(&d.to_nfa()).nfa
}

fn reduction_chain() -> Outcome {
    let mut r = rng(SEED + 7);
    let mut bad = Vec::new();
    let mut yes = [0usize; 2];
    for (k, count) in [(2usize, 500), (3, 200)] {
        for i in 0..count {
            let (n, d) = (r.gen_range(1..=8), r.gen_range(1..=6));
            let p_one = r.gen_range(0.3..0.8);
            let ov = random_ov(&mut r, k, n, d, p_one);
            let expect = naive_ov(&ov).unwrap();
            yes[k - 2] += expect as usize;
            let dfas = kov_to_kie(&ov);
            let plain: Vec<Nfa> = dfas.iter().map(trimmed).collect();
            if naive_intersection(&plain).unwrap() != expect {
                bad.push(format!("{k}-OV {i}: intersection differs from OV = {expect}"));
            }
            if k == 2 {
                let binary: Vec<Nfa> = dfas.iter().map(expand_wildcards).collect();
                if naive_intersection(&binary).unwrap() != expect {
                    bad.push(format!("2-OV {i}: binary encoding changes the answer"));
                }
                let u = ie2_to_unambiguity(&plain[0], &plain[1]).unwrap();
                if is_unambiguous(&u).0 == expect {
                    bad.push(format!("2-OV {i}: unambiguity differs"));
                }
                if has_eda(&unambiguity_to_eda(&u)).0 != expect {
                    bad.push(format!("2-OV {i}: EDA differs"));
                }
                if naive_twins(&unambiguity_to_twins(&u)).unwrap() == expect {
                    bad.push(format!("2-OV {i}: twins differs"));
                }
            } else if has_ida(&ie3_to_ida(&plain[0], &plain[1], &plain[2]).unwrap()).0 != expect {
                bad.push(format!("3-OV {i}: IDA differs"));
            }
        }
    }
    for i in 0..200 {
        let (n, p_edge) = (r.gen_range(1..=4), r.gen_range(0.2..0.7));
        let g = random_layered(&mut r, 3, n, p_edge);
        let (d1, d2) = kcycle_to_2ie(&g);
        let expect = naive_kcycle(&g);
        if naive_intersection(&[d1.to_nfa(), d2.to_nfa()]).unwrap() != expect {
            bad.push(format!("layered graph {i}: intersection differs from cycle = {expect}"));
        }
        if is_unambiguous(&ie2_to_unambiguity(&trimmed(&d1), &trimmed(&d2)).unwrap()).0 == expect {
            bad.push(format!("layered graph {i}: unambiguity differs"));
        }
    }

    // Worked examples.
    let (d1, d2) = kcycle_to_2ie(&fixtures::three_layer_graph());
    if !(d1.accepts(&[1, 1, 0, 1]) && d2.accepts(&[1, 1, 0, 1])) {
        bad.push("three-layer graph: 1101 not accepted by both".into());
    }
    if !kov_to_kie(&fixtures::small_ov()).iter().all(|d| d.accepts(&[2, 1, 1, 2, 2, 1])) {
        bad.push("small OV: 211221 not accepted by both".into());
    }
    let [t1, t2, t3] = fixtures::aa_triple();
    let ida = ie3_to_ida(&t1, &t2, &t3).unwrap();
    let (dollar, hash) = (2, 3);
    match has_ida(&ida) {
        (true, Some(_))
            if [[0, 1, 2, 3, 0], [0, 4, 5, 6, 10], [10, 7, 8, 9, 10]]
                .iter()
                .all(|run| ida.is_run(&[dollar, 0, 0, hash], run)) => {}
        _ => bad.push("aa triple: no IDA on $aa#".into()),
    }
    let tw = unambiguity_to_twins(&fixtures::aba_two_runs());
    let n = 4;
    let word = [0, hash, 0, dollar, 1];
    let weight = |run: [usize; 6]| -> Option<i64> { (0..5).map(|i| tw.weight(run[i], word[i], run[i + 1])).sum() };
    let w1 = weight([2 * n + 2, 2 * n + 3, 0, 1, n + 1, 2 * n + 2]);
    let w2 = weight([2 * n + 3, 2 * n + 3, 0, 1, n + 1, 2 * n + 3]);
    if (w1, w2) != (Some(1), Some(2)) {
        bad.push(format!("aba automaton: cycle weights {w1:?}, {w2:?}"));
    }
    outcome(
        &bad,
        format!("500 2-OV ({} yes), 200 3-OV ({} yes), 200 layered graphs, four worked examples", yes[0], yes[1]),
    )
}

fn scaling() -> Outcome {
    let sizes = doubling_sizes(10, 20);
    let mut bad = Vec::new();
    let mut parts = Vec::new();
    for family in Family::ALL {
        let records = run_family(family, &sizes, 3, SEED);
        let report = scaling_report(family, &records, 5);
        parts.push(format!("{} {:.2} (<= {})", report.family, report.median_ratio, report.limit));
        if !report.pass {
            let ratios: Vec<String> = report.ratios.iter().map(|(n, x)| format!("{n}:{x:.2}")).collect();
            bad.push(format!("{} ratios {}", report.family, ratios.join(" ")));
        }
    }
    outcome(&bad, format!("median doubling ratios: {}", parts.join(", ")))
}

fn gcd_sums() -> Outcome {
    let mut r = rng(SEED + 9);
    let mut bad = Vec::new();
    let mut exponents = Vec::new();
    for i in 0..50 {
        let total = 10f64.powf(r.gen_range(3.0..=6.0)).round() as u64;
        let a = random_distinct_sum(&mut r, total);
        let s = gcd_sum(&a);
        let bound = total as u128 * a.iter().map(|&x| sigma0(x)).max().unwrap() as u128;
        exponents.push((s as f64).ln() / (total as f64).ln());
        if s > bound {
            bad.push(format!("set {i}: gcd sum {s} above N * max divisors = {bound}"));
        }
    }
    let max = exponents.iter().cloned().fold(f64::MIN, f64::max);
    let mean = exponents.iter().sum::<f64>() / exponents.len() as f64;
    outcome(&bad, format!("50 sets, log(gcd sum)/log N mean {mean:.3}, max {max:.3}"))
}

#[test]
fn acceptance() {
    type Check = fn() -> Outcome;
    let criteria: [(u32, &str, Check, Duration); 9] = [
        (1, "four fixture classes", reference_classes, Duration::from_secs(1)),
        (2, "general oracle equivalence", general_oracle, Duration::from_secs(120)),
        (3, "unary oracle equivalence", unary_oracle, Duration::from_secs(120)),
        (4, "progressions", progressions, Duration::from_secs(60)),
        (5, "sparsity of unambiguous graphs", sparsity, Duration::from_secs(60)),
        (6, "twins", twins, Duration::from_secs(120)),
        (7, "reduction chain", reduction_chain, Duration::from_secs(180)),
        (8, "near-linear scaling", scaling, Duration::from_secs(600)),
        (9, "gcd sums", gcd_sums, Duration::from_secs(60)),
    ];
    let mut failed = Vec::new();
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let mut o = check();
        let took = start.elapsed();
        if took > limit {
            o.pass = false;
            o.detail.push_str(&format!("; took {took:.1?}, limit {limit:?}"));
        }
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id} [{status}] {name} ({took:.2?}): {}", o.detail);
        if !o.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
