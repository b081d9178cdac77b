//! Polynomial-time deciders for unambiguity, EDA and IDA over any alphabet, based on
//! the self-product of the automaton with itself (pairs) and with two copies (triples).

use std::collections::{HashMap, VecDeque};

use crate::graph::{tarjan, Csr};
use crate::nfa::{trim, Nfa, Trimmed};
use crate::witness::{AmbiguityClass, AmbiguityVerdict, AmbiguityWitness, EdaWitness, IdaWitness, Witness};

/// Per state and symbol, the sorted successor list.
struct Delta {
    by_symbol: Vec<Vec<Vec<usize>>>,
}

impl Delta {
    fn new(a: &Nfa) -> Delta {
        let mut by_symbol = vec![vec![Vec::new(); a.alphabet_size()]; a.num_states()];
        for &(p, x, q) in a.transitions() {
            by_symbol[p][x].push(q);
        }
        Delta { by_symbol }
    }

    fn next(&self, p: usize, x: usize) -> &[usize] {
        &self.by_symbol[p][x]
    }

    /// Symbols on which `p` has at least one successor.
    fn symbols(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        self.by_symbol[p].iter().enumerate().filter(|(_, v)| !v.is_empty()).map(|(x, _)| x)
    }
}

/// A word with two distinct accepting runs, or `None` if `a` is unambiguous.
/// The word has length at most `n^2`, where `n` is the number of useful states.
pub fn ambiguity_witness(a: &Nfa) -> Option<AmbiguityWitness> {
    let t = trim(a);
    let w = ambiguity_witness_trim(&t.nfa)?;
    Some(AmbiguityWitness { word: w.word, runs: [t.lift(&w.runs[0]), t.lift(&w.runs[1])] })
}

pub fn is_unambiguous(a: &Nfa) -> (bool, Option<AmbiguityWitness>) {
    let w = ambiguity_witness(a);
    (w.is_none(), w)
}

/// Breadth-first search over (ordered pair, runs-differ flag) from `I x I`.
fn ambiguity_witness_trim(a: &Nfa) -> Option<AmbiguityWitness> {
    let n = a.num_states();
    let delta = Delta::new(a);
    let id = |p: usize, q: usize, f: bool| (p * n + q) * 2 + f as usize;
    const NONE: usize = usize::MAX;
    // parent state id and the symbol read to get here
    let mut parent: Vec<(usize, usize)> = vec![(NONE, NONE); 2 * n * n];
    let mut seen = vec![false; 2 * n * n];
    let mut queue = VecDeque::new();
    for &p in a.initial() {
        for &q in a.initial() {
            let s = id(p, q, p != q);
            seen[s] = true;
            queue.push_back((p, q, p != q));
        }
    }
    let mut goal = None;
    while let Some((p, q, f)) = queue.pop_front() {
        if f && a.is_final(p) && a.is_final(q) {
            goal = Some(id(p, q, f));
            break;
        }
        for x in delta.symbols(p) {
            for &p2 in delta.next(p, x) {
                for &q2 in delta.next(q, x) {
                    let f2 = f || p2 != q2;
                    let s2 = id(p2, q2, f2);
                    if !seen[s2] {
                        seen[s2] = true;
                        parent[s2] = (id(p, q, f), x);
                        queue.push_back((p2, q2, f2));
                    }
                }
            }
        }
    }
    let mut s = goal?;
    let (mut r1, mut r2, mut word) = (Vec::new(), Vec::new(), Vec::new());
    loop {
        let pair = s / 2;
        r1.push(pair / n);
        r2.push(pair % n);
        let (prev, x) = parent[s];
        if prev == NONE {
            break;
        }
        word.push(x);
        s = prev;
    }
    r1.reverse();
    r2.reverse();
    word.reverse();
    Some(AmbiguityWitness { word, runs: [r1, r2] })
}

/// Two distinct cycles at one state on a common word, or `None`.
/// The word has length at most `2 n^2`.
pub fn eda_witness(a: &Nfa) -> Option<EdaWitness> {
    let t = trim(a);
    let w = eda_witness_trim(&t.nfa)?;
    Some(EdaWitness {
        state: t.old_of_new[w.state],
        word: w.word,
        cycles: [t.lift(&w.cycles[0]), t.lift(&w.cycles[1])],
    })
}

pub fn has_eda(a: &Nfa) -> (bool, Option<EdaWitness>) {
    let w = eda_witness(a);
    (w.is_some(), w)
}

/// The pair graph explored from all diagonal pairs, with dense ids for the reached pairs.
struct PairGraph {
    pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    adj: Csr,
}

fn explore_pairs(a: &Nfa, delta: &Delta) -> PairGraph {
    let mut pairs: Vec<(usize, usize)> = (0..a.num_states()).map(|p| (p, p)).collect();
    let mut index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &pq)| (pq, i)).collect();
    let mut edges = Vec::new();
    let mut head = 0;
    while head < pairs.len() {
        let (p, q) = pairs[head];
        for x in delta.symbols(p) {
            for &p2 in delta.next(p, x) {
                for &q2 in delta.next(q, x) {
                    let next = pairs.len();
                    let j = *index.entry((p2, q2)).or_insert(next);
                    if j == next {
                        pairs.push((p2, q2));
                    }
                    edges.push((head, j));
                }
            }
        }
        head += 1;
    }
    let adj = Csr::from_edges(pairs.len(), edges.iter().copied());
    PairGraph { pairs, index, adj }
}

fn eda_witness_trim(a: &Nfa) -> Option<EdaWitness> {
    let delta = Delta::new(a);
    let g = explore_pairs(a, &delta);
    let scc = tarjan(&g.adj);
    let mut diagonal = vec![None; scc.count];
    let mut off = vec![None; scc.count];
    for (i, &(p, q)) in g.pairs.iter().enumerate() {
        let c = scc.comp[i];
        let slot = if p == q { &mut diagonal[c] } else { &mut off[c] };
        if slot.is_none() {
            *slot = Some(i);
        }
    }
    let c = (0..scc.count).find(|&c| diagonal[c].is_some() && off[c].is_some())?;
    let (d, o) = (diagonal[c].unwrap(), off[c].unwrap());
    let within = |p: (usize, usize)| scc.comp[g.index[&p]] == c;
    let (w1, path1) = pair_path(&delta, g.pairs[d], g.pairs[o], &within);
    let (w2, path2) = pair_path(&delta, g.pairs[o], g.pairs[d], &within);
    let mut word = w1;
    word.extend(w2);
    let mut path = path1;
    path.extend(&path2[1..]);
    let state = g.pairs[d].0;
    Some(EdaWitness { state, word, cycles: [path.iter().map(|x| x.0).collect(), path.iter().map(|x| x.1).collect()] })
}

/// Shortest labelled walk between two pairs through pairs accepted by `within`.
fn pair_path(
    delta: &Delta,
    from: (usize, usize),
    to: (usize, usize),
    within: &dyn Fn((usize, usize)) -> bool,
) -> (Vec<usize>, Vec<(usize, usize)>) {
    let mut parent: HashMap<(usize, usize), ((usize, usize), usize)> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut found = from == to;
    while !found {
        let Some((p, q)) = queue.pop_front() else { break };
        'scan: for x in delta.symbols(p) {
            for &p2 in delta.next(p, x) {
                for &q2 in delta.next(q, x) {
                    let v = (p2, q2);
                    if v == from || parent.contains_key(&v) || !within(v) {
                        continue;
                    }
                    parent.insert(v, ((p, q), x));
                    if v == to {
                        found = true;
                        break 'scan;
                    }
                    queue.push_back(v);
                }
            }
        }
    }
    assert!(found, "pairs of one component are mutually reachable");
    let mut word = Vec::new();
    let mut path = vec![to];
    let mut v = to;
    while v != from {
        let (u, x) = parent[&v];
        word.push(x);
        path.push(u);
        v = u;
    }
    word.reverse();
    path.reverse();
    (word, path)
}

/// States `p != q` with runs `p -> p`, `p -> q`, `q -> q` on a common word, or `None`.
/// Pairs are tried in lexicographic order and the first hit wins. The word has length
/// at most `n^3`.
pub fn ida_witness(a: &Nfa) -> Option<IdaWitness> {
    let t = trim(a);
    let w = ida_witness_trim(&t.nfa)?;
    Some(IdaWitness {
        p: t.old_of_new[w.p],
        q: t.old_of_new[w.q],
        word: w.word,
        runs: [t.lift(&w.runs[0]), t.lift(&w.runs[1]), t.lift(&w.runs[2])],
    })
}

pub fn has_ida(a: &Nfa) -> (bool, Option<IdaWitness>) {
    let w = ida_witness(a);
    (w.is_some(), w)
}

fn ida_witness_trim(a: &Nfa) -> Option<IdaWitness> {
    let n = a.num_states();
    let delta = Delta::new(a);
    let adj = Csr::from_edges(n, a.transitions().iter().map(|&(p, _, q)| (p, q)));
    let scc = tarjan(&adj);
    let mut size = vec![0usize; scc.count];
    for &c in &scc.comp {
        size[c] += 1;
    }
    let on_cycle: Vec<bool> = (0..n).map(|p| size[scc.comp[p]] > 1 || adj.neighbors(p).contains(&p)).collect();
    for p in (0..n).filter(|&p| on_cycle[p]) {
        // Candidates q: (p, q) reachable from (p, p) in the pair graph, q on a cycle.
        let mut seen: HashMap<(usize, usize), ()> = HashMap::from([((p, p), ())]);
        let mut queue = VecDeque::from([(p, p)]);
        let mut candidates = Vec::new();
        while let Some((x, y)) = queue.pop_front() {
            if x == p && y != p && on_cycle[y] {
                candidates.push(y);
            }
            for s in delta.symbols(x) {
                for &x2 in delta.next(x, s) {
                    for &y2 in delta.next(y, s) {
                        if seen.insert((x2, y2), ()).is_none() {
                            queue.push_back((x2, y2));
                        }
                    }
                }
            }
        }
        candidates.sort_unstable();
        for q in candidates {
            if let Some(w) = triple_path(&delta, (p, p, q), (p, q, q)) {
                return Some(w);
            }
        }
    }
    None
}

fn triple_path(delta: &Delta, from: (usize, usize, usize), to: (usize, usize, usize)) -> Option<IdaWitness> {
    type T = (usize, usize, usize);
    let mut parent: HashMap<T, (T, usize)> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut found = false;
    'bfs: while let Some((x, y, z)) = queue.pop_front() {
        for s in delta.symbols(x) {
            let (ys, zs) = (delta.next(y, s), delta.next(z, s));
            if ys.is_empty() || zs.is_empty() {
                continue;
            }
            for &x2 in delta.next(x, s) {
                for &y2 in ys {
                    for &z2 in zs {
                        let v = (x2, y2, z2);
                        if v == from || parent.contains_key(&v) {
                            continue;
                        }
                        parent.insert(v, ((x, y, z), s));
                        if v == to {
                            found = true;
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
        }
    }
    if !found {
        return None;
    }
    let mut word = Vec::new();
    let mut path = vec![to];
    let mut v = to;
    while v != from {
        let (u, s) = parent[&v];
        word.push(s);
        path.push(u);
        v = u;
    }
    word.reverse();
    path.reverse();
    Some(IdaWitness {
        p: from.0,
        q: to.2,
        word,
        runs: [
            path.iter().map(|t| t.0).collect(),
            path.iter().map(|t| t.1).collect(),
            path.iter().map(|t| t.2).collect(),
        ],
    })
}

/// Ambiguity class with a certificate. State ids in witnesses refer to `a`.
pub fn classify(a: &Nfa) -> AmbiguityVerdict {
    let t: Trimmed = trim(a);
    let b = &t.nfa;
    let verdict = |class, witness| AmbiguityVerdict { class, witness };
    if b.num_states() == 0 {
        return verdict(AmbiguityClass::Unambiguous, None);
    }
    let Some(two) = ambiguity_witness_trim(b) else {
        return verdict(AmbiguityClass::Unambiguous, None);
    };
    let Some(ida) = ida_witness_trim(b) else {
        let w = AmbiguityWitness { word: two.word, runs: [t.lift(&two.runs[0]), t.lift(&two.runs[1])] };
        return verdict(AmbiguityClass::FinitelyAmbiguous, Some(Witness::TwoRuns(w)));
    };
    let Some(eda) = eda_witness_trim(b) else {
        let w = IdaWitness {
            p: t.old_of_new[ida.p],
            q: t.old_of_new[ida.q],
            word: ida.word,
            runs: [t.lift(&ida.runs[0]), t.lift(&ida.runs[1]), t.lift(&ida.runs[2])],
        };
        return verdict(AmbiguityClass::PolynomiallyAmbiguous, Some(Witness::Ida(w)));
    };
    let w = EdaWitness {
        state: t.old_of_new[eda.state],
        word: eda.word,
        cycles: [t.lift(&eda.cycles[0]), t.lift(&eda.cycles[1])],
    };
    verdict(AmbiguityClass::ExponentiallyAmbiguous, Some(Witness::Eda(w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn reference_automata_classify() {
        assert_eq!(classify(&fixtures::a1()).class, AmbiguityClass::Unambiguous);
        assert_eq!(classify(&fixtures::a2()).class, AmbiguityClass::ExponentiallyAmbiguous);
        assert_eq!(classify(&fixtures::a3()).class, AmbiguityClass::FinitelyAmbiguous);
        assert_eq!(classify(&fixtures::a4()).class, AmbiguityClass::PolynomiallyAmbiguous);
        for a in [fixtures::a1(), fixtures::a2(), fixtures::a3(), fixtures::a4()] {
            assert!(classify(&a).replays(&a));
        }
    }

    #[test]
    fn a3_witness_is_the_single_letter() {
        let w = ambiguity_witness(&fixtures::a3()).unwrap();
        assert_eq!(w.word, vec![0]);
        assert!(w.replays(&fixtures::a3()));
    }

    #[test]
    fn a2_eda_at_first_state() {
        let w = eda_witness(&fixtures::a2()).unwrap();
        assert!(w.replays(&fixtures::a2()));
        assert_eq!(w.word.len(), 2);
    }

    #[test]
    fn a4_ida_between_cycles() {
        let a4 = fixtures::a4();
        let w = ida_witness(&a4).unwrap();
        assert!(w.replays(&a4));
        assert_eq!((w.p, w.q), (0, 2));
        assert_eq!(w.word.len() % 6, 0);
        assert!(eda_witness(&a4).is_none());
        // The pair (0, 3) with the word 0^6 is an IDA triple as well.
        let runs = [vec![0, 1, 0, 1, 0, 1, 0], vec![0, 1, 0, 1, 0, 2, 3], vec![3, 4, 2, 3, 4, 2, 3]];
        let w = IdaWitness { p: 0, q: 3, word: vec![0; 6], runs };
        assert!(w.replays(&a4));
    }

    #[test]
    fn single_state_loop_is_unambiguous() {
        let a = Nfa::new(1, 1, [(0, 0, 0)], [0], [0]).unwrap();
        assert!(is_unambiguous(&a).0);
        assert!(!has_eda(&a).0);
        assert!(!has_ida(&a).0);
    }

    #[test]
    fn empty_language_is_unambiguous() {
        let a = Nfa::new(2, 1, [(0, 0, 0)], [0], [1]).unwrap();
        assert_eq!(classify(&a), AmbiguityVerdict { class: AmbiguityClass::Unambiguous, witness: None });
    }

    #[test]
    fn acyclic_has_no_ida() {
        let a = Nfa::new(4, 1, [(0, 0, 1), (0, 0, 2), (1, 0, 3), (2, 0, 3)], [0], [3]).unwrap();
        assert!(!has_ida(&a).0);
        assert!(!is_unambiguous(&a).0);
    }

    #[test]
    fn witness_ids_refer_to_untrimmed_input() {
        // State 0 is useless; the ambiguous part lives on 1..=4.
        let a = Nfa::new(5, 1, [(0, 0, 0), (1, 0, 2), (1, 0, 3), (2, 0, 4), (3, 0, 4)], [1], [4]).unwrap();
        let w = ambiguity_witness(&a).unwrap();
        assert!(w.replays(&a));
    }
}
