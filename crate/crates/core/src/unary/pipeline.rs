//! End-to-end unary decisions on graphs and automata.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graph::{to_st_graph, trim_graph, StGraph};
use crate::nfa::{normal_form, normalize, trim, Nfa, NormalForm};
use crate::progressions::disjoint_progressions;
use crate::witness::{AmbiguityClass, AmbiguityVerdict, AmbiguityWitness, EdaWitness, IdaWitness, Witness};

use super::bridge::{reduce_trimmed, ProgressionsOutcome};
use super::cycles::{eda_cycles, ida_walks};
use super::{walks_of_length, EqualLengthWalks};

/// A trim unambiguous unary graph has at most this many edges per vertex; denser trim
/// graphs are ambiguous.
pub const SPARSITY_FACTOR: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UnaryDecision {
    pub unambiguous: bool,
    /// For an ambiguous graph, a length with two distinct st-walks, when known without
    /// extra work.
    pub length: Option<u128>,
}

/// Decides unambiguity of a unary graph without building a witness.
pub fn unary_decide(g: &StGraph) -> UnaryDecision {
    let Some(t) = trim_graph(g) else {
        return UnaryDecision { unambiguous: true, length: None };
    };
    decide_trimmed(&t.graph, true)
}

fn decide_trimmed(g: &StGraph, guards: bool) -> UnaryDecision {
    let ambiguous = |length| UnaryDecision { unambiguous: false, length };
    match reduce_trimmed(g, guards) {
        ProgressionsOutcome::Unambiguous => UnaryDecision { unambiguous: true, length: None },
        ProgressionsOutcome::Ambiguous { length, .. } => ambiguous(length),
        ProgressionsOutcome::Instance(u) => match disjoint_progressions(&u.instance) {
            (true, _) => UnaryDecision { unambiguous: true, length: None },
            (false, c) => ambiguous(Some(u.collision_length(&c.expect("collision")))),
        },
    }
}

/// Decides unambiguity of a unary graph. An ambiguous answer comes with two distinct
/// st-walks of equal length, unless the length is too large to extract them (see
/// [`super::EXTRACTION_CELLS`]).
pub fn unary_is_unambiguous(g: &StGraph) -> (bool, Option<EqualLengthWalks>) {
    let Some(t) = trim_graph(g) else { return (true, None) };
    let h = &t.graph;
    if let ProgressionsOutcome::Ambiguous { walks: Some(w), .. } = reduce_trimmed(h, true) {
        return (false, Some(w.lift(&t.old_of_new)));
    }
    let d = decide_trimmed(h, true);
    if d.unambiguous {
        return (true, None);
    }
    let length = match d.length {
        Some(l) => l,
        None => decide_trimmed(h, false).length.expect("unguarded runs name a length"),
    };
    (false, walks_of_length(h, length).map(|w| w.lift(&t.old_of_new)))
}

/// Ambiguity class of a unary automaton using the linear-time structure tests and the
/// unary unambiguity pipeline. Witness state ids refer to `a`.
pub fn unary_classify(a: &Nfa) -> Result<AmbiguityVerdict> {
    if !a.is_unary() {
        return invalid(format!("expected a unary automaton, alphabet size is {}", a.alphabet_size()));
    }
    let t = trim(a);
    let b = &t.nfa;
    let verdict = |class, witness| Ok(AmbiguityVerdict { class, witness });
    if b.num_states() == 0 {
        return verdict(AmbiguityClass::Unambiguous, None);
    }
    // Two states that are both initial and final accept the empty word twice. The graph
    // only sees non-empty words.
    let both: Vec<usize> = b.initial().iter().copied().filter(|&q| b.is_final(q)).take(2).collect();
    let empty_word = (both.len() == 2).then(|| {
        Witness::TwoRuns(AmbiguityWitness {
            word: Vec::new(),
            runs: [vec![t.old_of_new[both[0]]], vec![t.old_of_new[both[1]]]],
        })
    });
    let c = normalize(b);
    let g = to_st_graph(&c)?;
    let Some(tg) = trim_graph(&g) else {
        return match empty_word {
            Some(w) => verdict(AmbiguityClass::FinitelyAmbiguous, Some(w)),
            None => verdict(AmbiguityClass::Unambiguous, None),
        };
    };
    let graph = &tg.graph;
    // Cycle states are states of `b`: auxiliary states have no incoming or no outgoing
    // transitions.
    let to_a = |w: &[usize]| -> Vec<usize> { w.iter().map(|&v| t.old_of_new[tg.old_of_new[v]]).collect() };

    if let Some((x, c1, c2)) = eda_cycles(graph) {
        let mut first = c1.clone();
        first.extend_from_slice(&c2[1..]);
        let mut second = c2;
        second.extend_from_slice(&c1[1..]);
        let w =
            EdaWitness { state: to_a(&[x])[0], word: vec![0; first.len() - 1], cycles: [to_a(&first), to_a(&second)] };
        return verdict(AmbiguityClass::ExponentiallyAmbiguous, Some(Witness::Eda(w)));
    }
    if let Some((p, q, runs)) = ida_walks(graph) {
        let w = IdaWitness {
            p: to_a(&[p])[0],
            q: to_a(&[q])[0],
            word: vec![0; runs[0].len() - 1],
            runs: [to_a(&runs[0]), to_a(&runs[1]), to_a(&runs[2])],
        };
        return verdict(AmbiguityClass::PolynomiallyAmbiguous, Some(Witness::Ida(w)));
    }
    if empty_word.is_some() {
        return verdict(AmbiguityClass::FinitelyAmbiguous, empty_word);
    }
    if let NormalForm::Ambiguous(w) = normal_form(b) {
        let w = AmbiguityWitness { word: w.word, runs: [t.lift(&w.runs[0]), t.lift(&w.runs[1])] };
        return verdict(AmbiguityClass::FinitelyAmbiguous, Some(Witness::TwoRuns(w)));
    }
    let (unambiguous, walks) = unary_is_unambiguous(graph);
    if unambiguous {
        return verdict(AmbiguityClass::Unambiguous, None);
    }
    let witness = walks.map(|w| {
        let runs = w.walks.map(|walk| {
            let in_c: Vec<usize> = walk.iter().map(|&v| tg.old_of_new[v]).collect();
            t.lift(&walk_to_run(b, &c, &in_c))
        });
        Witness::TwoRuns(AmbiguityWitness { word: vec![0; runs[0].len() - 1], runs })
    });
    verdict(AmbiguityClass::FinitelyAmbiguous, witness)
}

/// Maps a walk of `normalize(b)` back to a run of `b` by replacing the auxiliary initial
/// and final states with the states whose transitions they copy.
fn walk_to_run(b: &Nfa, c: &Nfa, walk: &[usize]) -> Vec<usize> {
    let n = b.num_states();
    let mut run = walk.to_vec();
    let last = run.len() - 1;
    let aux_start = run[0] >= n;
    let aux_end = run[last] >= n;
    if !aux_start && !aux_end {
        return run;
    }
    debug_assert!(c.is_normal_form());
    if last == 1 && aux_start && aux_end {
        let (p, _, q) = *b
            .transitions()
            .iter()
            .find(|&&(p, _, q)| b.is_initial(p) && b.is_final(q))
            .expect("direct copy comes from an initial-to-final transition");
        return vec![p, q];
    }
    if aux_start {
        run[0] = *b.initial().iter().find(|&&p| b.has_transition(p, 0, run[1])).expect("copied transition");
    }
    if aux_end {
        run[last] = *b.finals().iter().find(|&&q| b.has_transition(run[last - 1], 0, q)).expect("copied transition");
    }
    run
}
