//! Nondeterministic automata: construction, trimming, normal form and run counting.

use std::collections::VecDeque;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::witness::AmbiguityWitness;

/// A transition `(source, symbol, target)`.
pub type Transition = (usize, usize, usize);

/// An NFA without ε-transitions. States are `0..num_states`, symbols `0..alphabet_size`.
///
/// Transitions, initial and final states are kept sorted and deduplicated, so two
/// automata with the same transition set compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Nfa {
    num_states: usize,
    alphabet_size: usize,
    transitions: Vec<Transition>,
    initial: Vec<usize>,
    finals: Vec<usize>,
}

impl Nfa {
    pub fn new(
        num_states: usize,
        alphabet_size: usize,
        transitions: impl IntoIterator<Item = Transition>,
        initial: impl IntoIterator<Item = usize>,
        finals: impl IntoIterator<Item = usize>,
    ) -> Result<Nfa> {
        let mut transitions: Vec<Transition> = transitions.into_iter().collect();
        for &(p, a, q) in &transitions {
            if p >= num_states || q >= num_states {
                return invalid(format!("transition ({p},{a},{q}) uses a state >= {num_states}"));
            }
            if a >= alphabet_size {
                return invalid(format!("transition ({p},{a},{q}) uses a symbol >= {alphabet_size}"));
            }
        }
        transitions.sort_unstable();
        transitions.dedup();
        let initial = sorted_states(initial, num_states, "initial")?;
        let finals = sorted_states(finals, num_states, "final")?;
        Ok(Nfa { num_states, alphabet_size, transitions, initial, finals })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn finals(&self) -> &[usize] {
        &self.finals
    }

    /// `|Q| + |δ|`.
    pub fn size(&self) -> usize {
        self.num_states + self.transitions.len()
    }

    pub fn is_initial(&self, q: usize) -> bool {
        self.initial.binary_search(&q).is_ok()
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals.binary_search(&q).is_ok()
    }

    pub fn has_transition(&self, p: usize, a: usize, q: usize) -> bool {
        self.transitions.binary_search(&(p, a, q)).is_ok()
    }

    pub fn is_unary(&self) -> bool {
        self.alphabet_size == 1
    }

    pub fn is_normal_form(&self) -> bool {
        self.initial.len() == 1 && self.finals.len() == 1
    }

    /// At most one initial state and at most one successor per (state, symbol).
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() <= 1 && self.transitions.windows(2).all(|w| (w[0].0, w[0].1) != (w[1].0, w[1].1))
    }

    /// Outgoing `(symbol, target)` lists per state, sorted.
    pub fn successors(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.num_states];
        for &(p, a, q) in &self.transitions {
            out[p].push((a, q));
        }
        out
    }

    /// Incoming `(symbol, source)` lists per state.
    pub fn predecessors(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.num_states];
        for &(p, a, q) in &self.transitions {
            inc[q].push((a, p));
        }
        for list in &mut inc {
            list.sort_unstable();
        }
        inc
    }

    /// Whether `states` is a run of the automaton on `word` (not necessarily accepting).
    pub fn is_run(&self, word: &[usize], states: &[usize]) -> bool {
        states.len() == word.len() + 1
            && states.iter().all(|&q| q < self.num_states)
            && word.iter().enumerate().all(|(i, &a)| self.has_transition(states[i], a, states[i + 1]))
    }

    pub fn is_accepting_run(&self, word: &[usize], states: &[usize]) -> bool {
        self.is_run(word, states) && self.is_initial(states[0]) && self.is_final(states[states.len() - 1])
    }

    /// Whether some run on `word` ends in a final state.
    pub fn accepts(&self, word: &[usize]) -> bool {
        let succ = self.successors();
        let mut current = vec![false; self.num_states];
        for &q in &self.initial {
            current[q] = true;
        }
        for &a in word {
            let mut next = vec![false; self.num_states];
            for (p, list) in succ.iter().enumerate() {
                if current[p] {
                    for &(b, q) in list {
                        if b == a {
                            next[q] = true;
                        }
                    }
                }
            }
            current = next;
        }
        self.finals.iter().any(|&f| current[f])
    }

    /// Copy with every transition reversed and initial/final sets swapped.
    pub fn reversed(&self) -> Nfa {
        Nfa::new(
            self.num_states,
            self.alphabet_size,
            self.transitions.iter().map(|&(p, a, q)| (q, a, p)),
            self.finals.iter().copied(),
            self.initial.iter().copied(),
        )
        .expect("reversal keeps ids in range")
    }
}

fn sorted_states(states: impl IntoIterator<Item = usize>, n: usize, what: &str) -> Result<Vec<usize>> {
    let mut v: Vec<usize> = states.into_iter().collect();
    if let Some(&bad) = v.iter().find(|&&q| q >= n) {
        return invalid(format!("{what} state {bad} >= {n}"));
    }
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// A weighted automaton over (min,+) integers: an NFA plus one weight per transition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedAutomaton {
    nfa: Nfa,
    /// Aligned with `nfa.transitions()`.
    weights: Vec<i64>,
}

impl WeightedAutomaton {
    /// Builds from weighted transitions. Repeating a transition with the same weight is
    /// allowed; repeating it with a different weight is an error.
    pub fn new(
        num_states: usize,
        alphabet_size: usize,
        transitions: impl IntoIterator<Item = (usize, usize, usize, i64)>,
        initial: impl IntoIterator<Item = usize>,
        finals: impl IntoIterator<Item = usize>,
    ) -> Result<WeightedAutomaton> {
        let mut weighted: Vec<(usize, usize, usize, i64)> = transitions.into_iter().collect();
        weighted.sort_unstable();
        weighted.dedup();
        for w in weighted.windows(2) {
            if (w[0].0, w[0].1, w[0].2) == (w[1].0, w[1].1, w[1].2) {
                return invalid(format!("transition ({},{},{}) has two weights", w[0].0, w[0].1, w[0].2));
            }
        }
        let nfa = Nfa::new(num_states, alphabet_size, weighted.iter().map(|&(p, a, q, _)| (p, a, q)), initial, finals)?;
        let weights = weighted.iter().map(|t| t.3).collect();
        Ok(WeightedAutomaton { nfa, weights })
    }

    pub fn nfa(&self) -> &Nfa {
        &self.nfa
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn weight(&self, p: usize, a: usize, q: usize) -> Option<i64> {
        self.nfa.transitions.binary_search(&(p, a, q)).ok().map(|i| self.weights[i])
    }

    /// `(p, a, q, weight)` for every transition, sorted.
    pub fn weighted_transitions(&self) -> impl Iterator<Item = (usize, usize, usize, i64)> + '_ {
        self.nfa.transitions.iter().zip(&self.weights).map(|(&(p, a, q), &w)| (p, a, q, w))
    }
}

/// Result of [`trim`]: the trimmed automaton and, for each new state, its original id.
#[derive(Clone, Debug)]
pub struct Trimmed {
    pub nfa: Nfa,
    pub old_of_new: Vec<usize>,
}

impl Trimmed {
    pub fn lift(&self, states: &[usize]) -> Vec<usize> {
        states.iter().map(|&q| self.old_of_new[q]).collect()
    }
}

/// Marks the states reachable from `sources` along `adj`.
pub(crate) fn reach(adj: &[Vec<usize>], sources: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &s in sources {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Keeps exactly the states that are reachable from an initial state and co-reachable
/// from a final state. Ids are compacted in increasing order.
pub fn trim(a: &Nfa) -> Trimmed {
    let n = a.num_states;
    let mut fwd = vec![Vec::new(); n];
    let mut bwd = vec![Vec::new(); n];
    for &(p, _, q) in &a.transitions {
        fwd[p].push(q);
        bwd[q].push(p);
    }
    let reachable = reach(&fwd, &a.initial);
    let coreachable = reach(&bwd, &a.finals);
    let mut new_of_old = vec![usize::MAX; n];
    let mut old_of_new = Vec::new();
    for q in 0..n {
        if reachable[q] && coreachable[q] {
            new_of_old[q] = old_of_new.len();
            old_of_new.push(q);
        }
    }
    let keep = |q: usize| new_of_old[q] != usize::MAX;
    let nfa = Nfa::new(
        old_of_new.len(),
        a.alphabet_size,
        a.transitions
            .iter()
            .filter(|&&(p, _, q)| keep(p) && keep(q))
            .map(|&(p, x, q)| (new_of_old[p], x, new_of_old[q])),
        a.initial.iter().filter(|&&q| keep(q)).map(|&q| new_of_old[q]),
        a.finals.iter().filter(|&&q| keep(q)).map(|&q| new_of_old[q]),
    )
    .expect("trim keeps ids in range");
    Trimmed { nfa, old_of_new }
}

/// Brings `a` to a single initial and a single final state by adding at most two
/// auxiliary states: a new initial state copying the outgoing transitions of all
/// initial states, and a new final state copying the incoming transitions of all
/// final states. An automaton already in normal form is returned unchanged.
///
/// Because transitions form a set, two copies can coincide (for example two final
/// states entered from the same state on the same symbol). Then the copy carries fewer
/// runs than the original. [`normal_form`] detects exactly these cases. The empty word
/// is never accepted by the output unless the input was already normal.
pub fn normalize(a: &Nfa) -> Nfa {
    if a.is_normal_form() {
        return a.clone();
    }
    let mut n = a.num_states;
    let new_initial = (a.initial.len() != 1).then(|| {
        n += 1;
        n - 1
    });
    let new_final = (a.finals.len() != 1).then(|| {
        n += 1;
        n - 1
    });
    let s = new_initial.unwrap_or_else(|| a.initial[0]);
    let t = new_final.unwrap_or_else(|| a.finals[0]);
    let mut transitions = a.transitions.clone();
    for &(p, x, q) in &a.transitions {
        let from = if new_initial.is_some() && a.is_initial(p) { Some(s) } else { None };
        let to = if new_final.is_some() && a.is_final(q) { Some(t) } else { None };
        if let Some(i) = from {
            transitions.push((i, x, q));
        }
        if let Some(f) = to {
            transitions.push((p, x, f));
        }
        if let (Some(i), Some(f)) = (from, to) {
            transitions.push((i, x, f));
        }
    }
    Nfa::new(n, a.alphabet_size, transitions, [s], [t]).expect("normalize keeps ids in range")
}

/// Outcome of [`normal_form`].
#[derive(Clone, Debug)]
pub enum NormalForm {
    /// `Runs(w)` of the returned automaton equals `Runs(w)` of the input for every
    /// non-empty word `w`.
    Exact(Nfa),
    /// Normalizing would merge runs; the input is ambiguous, as witnessed here.
    Ambiguous(AmbiguityWitness),
}

/// Trims `a` and normalizes the result, or reports the ambiguity that normalizing
/// would hide. State ids of a witness refer to `a`.
pub fn normal_form(a: &Nfa) -> NormalForm {
    let trimmed = trim(a);
    let b = &trimmed.nfa;
    if let Some(w) = merge_witness(b) {
        return NormalForm::Ambiguous(AmbiguityWitness {
            word: w.word,
            runs: [trimmed.lift(&w.runs[0]), trimmed.lift(&w.runs[1])],
        });
    }
    NormalForm::Exact(normalize(b))
}

/// On a trim automaton, finds two accepting runs that [`normalize`] would merge.
fn merge_witness(a: &Nfa) -> Option<AmbiguityWitness> {
    let both: Vec<usize> = a.initial.iter().copied().filter(|&q| a.is_final(q)).collect();
    if both.len() >= 2 {
        return Some(AmbiguityWitness { word: vec![], runs: [vec![both[0]], vec![both[1]]] });
    }
    if a.is_normal_form() {
        return None;
    }
    let copy_initial = a.initial.len() != 1;
    let copy_final = a.finals.len() != 1;
    // Key of the copied transition -> original transition.
    let mut seen_in: Vec<((usize, usize), Transition)> = Vec::new();
    let mut seen_out: Vec<((usize, usize), Transition)> = Vec::new();
    let mut seen_both: Vec<(usize, Transition)> = Vec::new();
    for &(p, x, q) in &a.transitions {
        if copy_initial && a.is_initial(p) {
            seen_in.push(((x, q), (p, x, q)));
        }
        if copy_final && a.is_final(q) {
            seen_out.push(((p, x), (p, x, q)));
        }
        if copy_initial && copy_final && a.is_initial(p) && a.is_final(q) {
            seen_both.push((x, (p, x, q)));
        }
    }
    fn first_clash<K: Ord + Copy>(v: &mut [(K, Transition)]) -> Option<(Transition, Transition)> {
        v.sort_unstable();
        v.windows(2).find(|w| w[0].0 == w[1].0).map(|w| (w[0].1, w[1].1))
    }
    let succ = a.successors();
    if let Some((t1, t2)) = first_clash(&mut seen_both) {
        return Some(AmbiguityWitness { word: vec![t1.1], runs: [vec![t1.0, t1.2], vec![t2.0, t2.2]] });
    }
    if let Some((t1, t2)) = first_clash(&mut seen_in) {
        // Same symbol and target from two initial states; finish along a shortest path.
        let (word, tail) = shortest_word_to_final(a, &succ, t1.2);
        let mut w = vec![t1.1];
        w.extend(word);
        let mut r1 = vec![t1.0];
        r1.extend(&tail);
        let mut r2 = vec![t2.0];
        r2.extend(&tail);
        return Some(AmbiguityWitness { word: w, runs: [r1, r2] });
    }
    if let Some((t1, t2)) = first_clash(&mut seen_out) {
        let rev = a.reversed();
        let rsucc = rev.successors();
        let (mut word, mut head) = shortest_word_to_final(&rev, &rsucc, t1.0);
        word.reverse();
        head.reverse();
        word.push(t1.1);
        let mut r1 = head.clone();
        r1.push(t1.2);
        let mut r2 = head;
        r2.push(t2.2);
        return Some(AmbiguityWitness { word, runs: [r1, r2] });
    }
    None
}

/// BFS from `q` to a final state; returns the word and the visited states (starting at `q`).
fn shortest_word_to_final(a: &Nfa, succ: &[Vec<(usize, usize)>], q: usize) -> (Vec<usize>, Vec<usize>) {
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; a.num_states];
    let mut seen = vec![false; a.num_states];
    seen[q] = true;
    let mut queue = VecDeque::from([q]);
    let mut end = None;
    while let Some(u) = queue.pop_front() {
        if a.is_final(u) {
            end = Some(u);
            break;
        }
        for &(x, v) in &succ[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some((u, x));
                queue.push_back(v);
            }
        }
    }
    let mut v = end.expect("state of a trim automaton reaches a final state");
    let mut states = vec![v];
    let mut word = Vec::new();
    while let Some((u, x)) = parent[v] {
        word.push(x);
        states.push(u);
        v = u;
    }
    word.reverse();
    states.reverse();
    (word, states)
}

/// Number of accepting runs on `word`, by dynamic programming over run-count vectors.
/// Uses `u64` counters until a value would overflow, then switches to big integers.
pub fn count_runs(a: &Nfa, word: &[usize]) -> BigUint {
    let succ = a.successors();
    let mut small = vec![0u64; a.num_states];
    for &q in &a.initial {
        small[q] = 1;
    }
    let mut pos = 0;
    while pos < word.len() {
        match step_small(&succ, &small, word[pos]) {
            Some(next) => small = next,
            None => break,
        }
        pos += 1;
    }
    if pos == word.len() {
        return a.finals.iter().map(|&f| BigUint::from(small[f])).sum();
    }
    let mut big: Vec<BigUint> = small.into_iter().map(BigUint::from).collect();
    for &x in &word[pos..] {
        let mut next = vec![BigUint::default(); a.num_states];
        for (p, list) in succ.iter().enumerate() {
            if big[p] == BigUint::default() {
                continue;
            }
            for &(b, q) in list {
                if b == x {
                    next[q] += &big[p];
                }
            }
        }
        big = next;
    }
    a.finals.iter().map(|&f| big[f].clone()).sum()
}

fn step_small(succ: &[Vec<(usize, usize)>], cur: &[u64], x: usize) -> Option<Vec<u64>> {
    let mut next = vec![0u64; cur.len()];
    for (p, list) in succ.iter().enumerate() {
        if cur[p] == 0 {
            continue;
        }
        for &(b, q) in list {
            if b == x {
                next[q] = next[q].checked_add(cur[p])?;
            }
        }
    }
    Some(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn new_rejects_out_of_range() {
        assert!(Nfa::new(2, 1, [(0, 1, 1)], [0], [1]).is_err());
        assert!(Nfa::new(2, 1, [(0, 0, 2)], [0], [1]).is_err());
        assert!(Nfa::new(2, 1, [], [3], [1]).is_err());
    }

    #[test]
    fn duplicate_transitions_collapse() {
        let a = Nfa::new(2, 1, [(0, 0, 1), (0, 0, 1)], [0], [1]).unwrap();
        assert_eq!(a.transitions().len(), 1);
    }

    #[test]
    fn conflicting_weights_rejected() {
        assert!(WeightedAutomaton::new(2, 1, [(0, 0, 1, 3), (0, 0, 1, 4)], [0], [1]).is_err());
        assert!(WeightedAutomaton::new(2, 1, [(0, 0, 1, 3), (0, 0, 1, 3)], [0], [1]).is_ok());
    }

    #[test]
    fn trim_removes_unreachable_state() {
        let a = Nfa::new(3, 1, [(0, 0, 1), (2, 0, 1)], [0], [1]).unwrap();
        let t = trim(&a);
        assert_eq!(t.nfa.num_states(), 2);
        assert_eq!(t.old_of_new, vec![0, 1]);
        assert_eq!(t.nfa.transitions(), &[(0, 0, 1)]);
    }

    #[test]
    fn trim_keeps_trim_automaton() {
        let a1 = fixtures::a1();
        let t = trim(&a1);
        assert_eq!(t.nfa, a1);
    }

    #[test]
    fn empty_word_runs() {
        let a = Nfa::new(3, 1, [], [0, 1, 2], [1, 2]).unwrap();
        assert_eq!(count_runs(&a, &[]), BigUint::from(2u32));
    }

    #[test]
    fn a2_has_exponentially_many_runs() {
        let a2 = fixtures::a2();
        for n in 1..=5u32 {
            let mut w = Vec::new();
            for _ in 1..n {
                w.extend([0, 2]);
            }
            w.push(0);
            assert_eq!(count_runs(&a2, &w), BigUint::from(1u64 << n));
        }
    }

    #[test]
    fn count_runs_promotes_past_u64() {
        let a2 = fixtures::a2();
        let mut w = Vec::new();
        for _ in 1..70 {
            w.extend([0, 2]);
        }
        w.push(0);
        assert_eq!(count_runs(&a2, &w), BigUint::from(1u8) << 70u32);
    }

    #[test]
    fn a4_run_count_on_seven_ones() {
        // 2a + 1 + 3b = 7 has two solutions.
        assert_eq!(count_runs(&fixtures::a4(), &[0; 7]), BigUint::from(2u8));
    }

    #[test]
    fn normalize_is_identity_on_normal_form() {
        let a4 = fixtures::a4();
        assert_eq!(normalize(&a4), a4);
    }

    #[test]
    fn normal_form_of_a3_reports_merged_runs() {
        let a3 = fixtures::a3();
        let b = normalize(&a3);
        assert!(b.is_normal_form());
        for w in [[0, 1], [0, 0]] {
            assert_eq!(count_runs(&b, &w), count_runs(&a3, &w));
        }
        match normal_form(&a3) {
            NormalForm::Ambiguous(w) => {
                assert_eq!(w.word, vec![0]);
                assert!(w.replays(&a3));
            }
            NormalForm::Exact(_) => panic!("A3 has two runs on 0 ending in distinct final states"),
        }
    }

    #[test]
    fn normal_form_exact_preserves_nonempty_counts() {
        let a = Nfa::new(4, 2, [(0, 0, 2), (1, 1, 2), (2, 0, 3), (2, 1, 2)], [0, 1], [3]).unwrap();
        let NormalForm::Exact(b) = normal_form(&a) else { panic!("no merge expected") };
        assert!(b.is_normal_form());
        for w in [vec![0, 0], vec![1, 0], vec![0, 1, 1, 0], vec![1]] {
            assert_eq!(count_runs(&a, &w), count_runs(&b, &w));
        }
    }

    #[test]
    fn deterministic_check() {
        assert!(!fixtures::a1().is_deterministic());
        let d = Nfa::new(2, 2, [(0, 0, 1), (0, 1, 0)], [0], [1]).unwrap();
        assert!(d.is_deterministic());
    }
}
