//! Randomized invariants. Each case draws a seed and builds its instance with the
//! library generators, so a failing case is reproducible from the printed seed.

use proptest::prelude::*;
use rand::Rng;

use unambig::baseline::{classify, has_eda, has_ida, is_unambiguous};
use unambig::format::{
    parse_automaton, parse_layers, parse_ov, parse_progressions, write_layers, write_nfa, write_ov, write_progressions,
    write_weighted, Automaton,
};
use unambig::generate::{
    disjoint_progressions_instance, random_dfa, random_layered, random_nfa, random_ov, random_progressions,
    random_trim_nfa, random_trim_unary_graph, random_weighted_graph, rng, Rng64,
};
use unambig::nfa::{count_runs, normal_form, trim, Nfa, NormalForm, WeightedAutomaton};
use unambig::oracles::{naive_dp_disjoint, naive_intersection, naive_unary_twins, repeated_walk_length};
use unambig::progressions::disjoint_progressions;
use unambig::reductions::{
    binary_encode, bits_per_symbol, encode_word, expand_wildcards, ie2_to_unambiguity, ie3_to_ida, unambiguity_to_eda,
    unambiguity_to_twins, GadgetDfa, Label,
};
use unambig::twins::unary_twins;
use unambig::unary::{progressions_to_graph, unary_classify, unary_is_unambiguous};
use unambig::witness::AmbiguityClass;

fn words(sigma: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut all = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer =
            layer.iter().flat_map(|w: &Vec<usize>| (0..sigma).map(move |a| [w.clone(), vec![a]].concat())).collect();
        all.extend(layer.iter().cloned());
    }
    all
}

/// A gadget DFA whose outgoing labels per state come from a random cut of the alphabet
/// into intervals, some of them with a hole.
fn random_gadget(r: &mut Rng64, n: usize, sigma: usize, concrete: bool) -> GadgetDfa {
    let mut t = Vec::new();
    for p in 0..n {
        let mut lo = 0;
        while lo < sigma {
            let hi = r.gen_range(lo..sigma.min(lo + 6));
            let target = r.gen_range(0..n);
            match r.gen_range(0..4) {
                _ if concrete => {
                    for a in lo..=hi {
                        if r.gen_bool(0.7) {
                            t.push((p, Label::Symbol(a), r.gen_range(0..n)));
                        }
                    }
                }
                0 => {}
                1 => t.push((p, Label::Range { lo, hi }, target)),
                2 => {
                    let except = r.gen_range(lo..=hi);
                    t.push((p, Label::RangeExcept { lo, hi, except }, target));
                    if r.gen_bool(0.5) {
                        t.push((p, Label::Symbol(except), r.gen_range(0..n)));
                    }
                }
                _ => t.push((p, Label::Symbol(lo), target)),
            }
            lo = hi + 1;
        }
    }
    let finals = (0..n).filter(|_| r.gen_bool(0.4)).collect();
    GadgetDfa::new(n, sigma, t, 0, finals).expect("labels per state are disjoint")
}

/// Where the bits of `a` lead from `p`.
fn block_target(b: &Nfa, p: usize, a: usize, h: u32) -> Option<usize> {
    let succ = b.successors();
    let mut q = p;
    for i in (0..h).rev() {
        q = succ[q].iter().find(|s| s.0 == (a >> i) & 1)?.1;
    }
    Some(q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn wildcard_expansion_matches_label_semantics(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sigma = r.gen_range(2..=16);
        let n = r.gen_range(1..=5);
        let d = random_gadget(&mut r, n, sigma, false);
        let b = expand_wildcards(&d);
        let h = bits_per_symbol(sigma);
        prop_assert!(b.is_deterministic());
        for p in 0..n {
            for a in 0..sigma {
                prop_assert_eq!(block_target(&b, p, a, h), d.step(p, a));
            }
        }
        // States: originals, at most one partial node per label and level, and chains.
        prop_assert!(b.num_states() <= n + 2 * h as usize * d.transitions().len());
    }

    #[test]
    fn binary_encoding_preserves_acceptance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sigma = r.gen_range(2..=8);
        let n = r.gen_range(1..=6);
        let d = random_gadget(&mut r, n, sigma, true);
        let b = binary_encode(&d).unwrap();
        for w in words(sigma, 4) {
            prop_assert_eq!(d.accepts(&w), b.accepts(&encode_word(&w, sigma)));
        }
    }

    #[test]
    fn exact_normal_form_keeps_run_counts(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a_n = r.gen_range(1..=5);
        let a = random_nfa(&mut r, a_n, 2, 0.3);
        if let NormalForm::Exact(c) = normal_form(&a) {
            prop_assert!(c.is_normal_form());
            for w in words(2, 4).into_iter().skip(1) {
                prop_assert_eq!(count_runs(&a, &w), count_runs(&c, &w));
            }
        }
    }

    #[test]
    fn trimming_keeps_the_language(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a_n = r.gen_range(1..=6);
        let a = random_nfa(&mut r, a_n, 2, 0.25);
        let t = trim(&a).nfa;
        for w in words(2, 4) {
            prop_assert_eq!(a.accepts(&w), t.accepts(&w));
        }
    }

    #[test]
    fn unary_pipeline_agrees_with_baseline(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_trim_nfa(&mut r, 7, 1);
        let fast = unary_classify(&a).unwrap();
        prop_assert!(fast.replays(&a));
        prop_assert_eq!(fast.class, classify(&a).class);
    }

    #[test]
    fn walk_pairs_replay(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_trim_unary_graph(&mut r, 30, 1.5);
        let (ok, w) = unary_is_unambiguous(&g);
        let n = g.num_vertices();
        prop_assert_eq!(ok, repeated_walk_length(&g, 3 * n * n + 3 * n).is_none());
        if let Some(w) = w {
            prop_assert!(!ok && w.replays(&g));
        }
    }

    #[test]
    fn progressions_graph_is_unambiguous_iff_disjoint(seed in any::<u64>()) {
        let mut r = rng(seed);
        let total = r.gen_range(1..=40);
        let inst = random_progressions(&mut r, total);
        let g = progressions_to_graph(&inst);
        let (disjoint, c) = disjoint_progressions(&inst);
        prop_assert_eq!(disjoint, naive_dp_disjoint(&inst).unwrap());
        prop_assert_eq!(unary_is_unambiguous(&g).0, disjoint);
        if let Some(c) = c {
            // The collision value, plus the detour s -> cycle -> t, is a repeated length.
            prop_assert!(repeated_walk_length(&g, c.value as usize + 2).is_some());
        }
    }

    #[test]
    fn disjoint_generator_gives_sparse_unambiguous_graphs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let total = r.gen_range(1..=3000);
        let g = progressions_to_graph(&disjoint_progressions_instance(&mut r, total));
        prop_assert!(g.num_edges() <= 12 * g.num_vertices());
        prop_assert!(unary_is_unambiguous(&g).0);
    }

    #[test]
    fn twins_agrees_with_cycle_averages(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_weighted_graph(&mut r, 10, 4);
        let (ok, w) = unary_twins(&g);
        prop_assert_eq!(ok, naive_unary_twins(&g).unwrap());
        if let Some(w) = w {
            prop_assert!(!ok && w.replays(&g));
        }
    }

    #[test]
    fn union_reduction(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d1_n = r.gen_range(1..=4);
        let d1 = random_dfa(&mut r, d1_n, 2, 0.7);
        let d2_n = r.gen_range(1..=4);
        let d2 = random_dfa(&mut r, d2_n, 2, 0.7);
        let u = ie2_to_unambiguity(&d1, &d2).unwrap();
        prop_assert_eq!(u.num_states(), d1.num_states() + d2.num_states());
        prop_assert_eq!(is_unambiguous(&u).0, !naive_intersection(&[d1, d2]).unwrap());
    }

    #[test]
    fn eda_reduction(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a_n = r.gen_range(1..=5);
        let a = random_nfa(&mut r, a_n, 2, 0.3);
        let e = unambiguity_to_eda(&a);
        prop_assert_eq!(has_eda(&e).0, !is_unambiguous(&a).0);
        if let NormalForm::Exact(c) = normal_form(&a) {
            prop_assert_eq!(e.num_states(), c.num_states());
            prop_assert_eq!(e.transitions().len(), c.transitions().len() + 1);
            prop_assert_eq!(e.alphabet_size(), c.alphabet_size() + 1);
        }
    }

    #[test]
    fn ida_reduction(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d: Vec<Nfa> = (0..3).map(|_| {
            let n = r.gen_range(1..=4);
            random_dfa(&mut r, n, 2, 0.7)
        }).collect();
        let a = ie3_to_ida(&d[0], &d[1], &d[2]).unwrap();
        let states: usize = d.iter().map(Nfa::num_states).sum();
        let inner: usize = d.iter().map(|x| x.transitions().len()).sum();
        prop_assert_eq!(a.num_states(), states + 2);
        prop_assert!(a.transitions().len() <= inner + states + 3);
        prop_assert_eq!(a.alphabet_size(), 4);
        let (yes, w) = has_ida(&a);
        prop_assert_eq!(yes, naive_intersection(&d).unwrap());
        if let Some(w) = w {
            prop_assert!(w.replays(&a));
        }
    }

    #[test]
    fn twins_reduction_sizes_and_deterministic_input(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d_n = r.gen_range(1..=5);
        let d = random_dfa(&mut r, d_n, 2, 0.7);
        let w = unambiguity_to_twins(&d);
        if let NormalForm::Exact(c) = normal_form(&d) {
            let n = c.num_states();
            prop_assert_eq!(w.nfa().num_states(), 3 * n);
            prop_assert_eq!(w.nfa().transitions().len(), n + 3 * c.transitions().len() + 1);
            prop_assert_eq!(w.nfa().alphabet_size(), c.alphabet_size() + 2);
        }
        prop_assert!(unambig::oracles::naive_twins(&w).unwrap());
    }

    #[test]
    fn classes_are_ordered_by_witness_strength(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_trim_nfa(&mut r, 6, 2);
        let v = classify(&a);
        prop_assert_eq!(v.class == AmbiguityClass::ExponentiallyAmbiguous, has_eda(&a).0);
        prop_assert_eq!(v.class >= AmbiguityClass::PolynomiallyAmbiguous, has_ida(&a).0);
        prop_assert_eq!(v.class == AmbiguityClass::Unambiguous, is_unambiguous(&a).0);
    }

    #[test]
    fn text_formats_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a_n = r.gen_range(1..=6);
        let a = random_nfa(&mut r, a_n, 3, 0.2);
        prop_assert_eq!(parse_automaton(&write_nfa(&a)).unwrap(), Automaton::Plain(a.clone()));
        let weighted: Vec<(usize, usize, usize, i64)> =
            a.transitions().iter().map(|&(p, x, q)| (p, x, q, r.gen_range(-9..=9))).collect();
        if !weighted.is_empty() {
            let w = WeightedAutomaton::new(a.num_states(), 3, weighted, a.initial().to_vec(), a.finals().to_vec()).unwrap();
            prop_assert_eq!(parse_automaton(&write_weighted(&w)).unwrap(), Automaton::Weighted(w));
        }
        let total = r.gen_range(1..=30);
        let p = random_progressions(&mut r, total);
        prop_assert_eq!(parse_progressions(&write_progressions(&p)).unwrap(), p);
        let (k, n, d) = (r.gen_range(1..=3), r.gen_range(1..=4), r.gen_range(1..=5));
        let ov = random_ov(&mut r, k, n, d, 0.5);
        prop_assert_eq!(parse_ov(&write_ov(&ov)).unwrap(), ov);
        let (k, n) = (r.gen_range(2..=4), r.gen_range(1..=4));
        let g = random_layered(&mut r, k, n, 0.4);
        prop_assert_eq!(parse_layers(&write_layers(&g)).unwrap(), g);
    }
}
