//! Reductions from intersection and unambiguity to the ambiguity and twins questions.

use crate::error::{invalid, Result};
use crate::nfa::{normal_form, Nfa, NormalForm, WeightedAutomaton};

fn check_deterministic(dfas: &[&Nfa]) -> Result<usize> {
    if let Some(i) = dfas.iter().position(|d| !d.is_deterministic()) {
        return invalid(format!("input automaton {} is not deterministic", i + 1));
    }
    Ok(dfas.iter().map(|d| d.alphabet_size()).max().unwrap_or(0))
}

/// Shifted transitions of `a` for placement at `offset`.
fn shifted(a: &Nfa, offset: usize) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
    a.transitions().iter().map(move |&(p, x, q)| (p + offset, x, q + offset))
}

/// Disjoint union of two DFAs. It is unambiguous iff their languages are disjoint.
pub fn ie2_to_unambiguity(d1: &Nfa, d2: &Nfa) -> Result<Nfa> {
    let sigma = check_deterministic(&[d1, d2])?;
    let n1 = d1.num_states();
    Nfa::new(
        n1 + d2.num_states(),
        sigma,
        shifted(d1, 0).chain(shifted(d2, n1)),
        d1.initial().iter().copied().chain(d2.initial().iter().map(|q| q + n1)),
        d1.finals().iter().copied().chain(d2.finals().iter().map(|q| q + n1)),
    )
}

/// Smallest ambiguous automaton in normal form, standing in for inputs whose
/// normalization would hide their ambiguity.
fn canonical_ambiguous(sigma: usize) -> Nfa {
    Nfa::new(4, sigma.max(1), [(0, 0, 1), (0, 0, 2), (1, 0, 3), (2, 0, 3)], [0], [3]).unwrap()
}

fn exact_normal_form(a: &Nfa) -> Nfa {
    match normal_form(a) {
        NormalForm::Exact(c) => c,
        NormalForm::Ambiguous(_) => canonical_ambiguous(a.alphabet_size()),
    }
}

/// Trim normal form of `a` plus a transition from the final to the initial state on a
/// new symbol `#` (= old alphabet size). The result has an EDA iff `a` is ambiguous.
pub fn unambiguity_to_eda(a: &Nfa) -> Nfa {
    let c = exact_normal_form(a);
    let sigma = c.alphabet_size();
    let back = (c.finals()[0], sigma, c.initial()[0]);
    let trans = c.transitions().iter().copied().chain([back]);
    Nfa::new(c.num_states(), sigma + 1, trans, c.initial().to_vec(), c.finals().to_vec()).expect("ids in range")
}

/// Three DFAs wired between a source `s` and a sink `t`: the first loops on `s`, the
/// second leads from `s` to `t`, the third loops on `t`. Each is entered on `$` and
/// left on `#` (symbols `σ` and `σ + 1`). The result has an IDA iff the three
/// languages intersect.
///
/// State 0 is `s`, then the states of the three DFAs in order, then `t`.
pub fn ie3_to_ida(d1: &Nfa, d2: &Nfa, d3: &Nfa) -> Result<Nfa> {
    let sigma = check_deterministic(&[d1, d2, d3])?;
    let (dollar, hash) = (sigma, sigma + 1);
    let o1 = 1;
    let o2 = o1 + d1.num_states();
    let o3 = o2 + d2.num_states();
    let t = o3 + d3.num_states();
    let mut trans: Vec<(usize, usize, usize)> = Vec::new();
    let parts = [(d1, o1, 0, 0), (d2, o2, 0, t), (d3, o3, t, t)];
    for (d, offset, from, to) in parts {
        trans.extend(d.initial().iter().map(|&q| (from, dollar, q + offset)));
        trans.extend(shifted(d, offset));
        trans.extend(d.finals().iter().map(|&q| (q + offset, hash, to)));
    }
    Nfa::new(t + 1, sigma + 2, trans, [0], [t])
}

/// Weighted automaton with three copies of the trim normal form of `a`. Copies 1 and 3
/// repeat the transitions with weight 0; `$` moves from copy 1 to copy 2 in place;
/// each transition `(p, x, q)` leads from copy 2 to copy 3 with weight the 1-based rank
/// of `q` among the `x`-successors of `p`; `#` returns from the final state of copy 3
/// to the initial state of copy 1, which is both initial and final.
///
/// The result has the twins property iff `a` is unambiguous. State `q` of copy `c` has
/// id `c * n + q`; `$` and `#` are symbols `σ` and `σ + 1`.
pub fn unambiguity_to_twins(a: &Nfa) -> WeightedAutomaton {
    let c = exact_normal_form(a);
    let n = c.num_states();
    let sigma = c.alphabet_size();
    let (dollar, hash) = (sigma, sigma + 1);
    let mut trans = Vec::with_capacity(n + 3 * c.transitions().len() + 1);
    for &(p, x, q) in c.transitions() {
        trans.push((p, x, q, 0));
        trans.push((2 * n + p, x, 2 * n + q, 0));
    }
    trans.extend((0..n).map(|p| (p, dollar, n + p, 0)));
    // Transitions are sorted, so successors of (p, x) are consecutive and increasing.
    let mut rank = 0;
    for (i, &(p, x, q)) in c.transitions().iter().enumerate() {
        let same_group = i > 0 && (c.transitions()[i - 1].0, c.transitions()[i - 1].1) == (p, x);
        rank = if same_group { rank + 1 } else { 1 };
        trans.push((n + p, x, 2 * n + q, rank));
    }
    let (qi, qf) = (c.initial()[0], c.finals()[0]);
    trans.push((2 * n + qf, hash, qi, 0));
    WeightedAutomaton::new(3 * n, sigma + 2, trans, [qi], [qi]).expect("ids in range")
}
