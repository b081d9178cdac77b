//! DFAs with range labels, and their encoding over the binary alphabet.
//!
//! A symbol `a < σ` becomes `h = max(1, ceil(log2 σ))` bits, most significant first.
//! Bit patterns of value `>= σ` are dead.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::nfa::Nfa;

/// Label of a gadget transition. Ranges are inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Label {
    Symbol(usize),
    Range {
        lo: usize,
        hi: usize,
    },
    /// `lo..=hi` without `except`.
    RangeExcept {
        lo: usize,
        hi: usize,
        except: usize,
    },
}

impl Label {
    /// The whole alphabet `0..sigma`.
    pub fn any(sigma: usize) -> Label {
        Label::Range { lo: 0, hi: sigma - 1 }
    }

    /// The whole alphabet without `a`.
    pub fn all_but(sigma: usize, a: usize) -> Label {
        Label::RangeExcept { lo: 0, hi: sigma - 1, except: a }
    }

    fn bounds(&self) -> (usize, usize) {
        match *self {
            Label::Symbol(a) => (a, a),
            Label::Range { lo, hi } | Label::RangeExcept { lo, hi, .. } => (lo, hi),
        }
    }

    fn hole(&self) -> Option<usize> {
        match *self {
            Label::RangeExcept { lo, hi, except } if lo <= except && except <= hi => Some(except),
            _ => None,
        }
    }

    pub fn contains(&self, a: usize) -> bool {
        let (lo, hi) = self.bounds();
        lo <= a && a <= hi && self.hole() != Some(a)
    }

    /// Symbols matched, in increasing order.
    pub fn symbols(&self) -> impl Iterator<Item = usize> + '_ {
        let (lo, hi) = self.bounds();
        (lo..=hi).filter(move |&a| self.contains(a))
    }

    fn is_concrete(&self) -> bool {
        matches!(self, Label::Symbol(_))
    }

    fn covers(&self, lo: usize, hi: usize) -> bool {
        let (a, b) = self.bounds();
        a <= lo && hi <= b && !self.hole().is_some_and(|e| lo <= e && e <= hi)
    }

    fn meets(&self, lo: usize, hi: usize) -> bool {
        let (a, b) = self.bounds();
        let (from, to) = (a.max(lo), b.min(hi));
        from <= to && !(from == to && self.hole() == Some(from))
    }
}

/// A DFA whose transitions carry [`Label`]s. At most one transition applies to each
/// (state, symbol).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetDfa {
    num_states: usize,
    alphabet_size: usize,
    transitions: Vec<(usize, Label, usize)>,
    initial: usize,
    finals: Vec<usize>,
}

impl GadgetDfa {
    pub fn new(
        num_states: usize,
        alphabet_size: usize,
        mut transitions: Vec<(usize, Label, usize)>,
        initial: usize,
        finals: Vec<usize>,
    ) -> Result<GadgetDfa> {
        if alphabet_size == 0 {
            return invalid("empty alphabet");
        }
        if initial >= num_states || finals.iter().any(|&q| q >= num_states) {
            return invalid(format!("initial or final state >= {num_states}"));
        }
        for &(p, l, q) in &transitions {
            let (lo, hi) = l.bounds();
            if p >= num_states || q >= num_states || lo > hi || hi >= alphabet_size {
                return invalid(format!("bad transition ({p},{l:?},{q})"));
            }
        }
        transitions.sort_unstable();
        transitions.dedup();
        // Coverage count per symbol via a difference array over the label breakpoints.
        let mut start = 0;
        while start < transitions.len() {
            let p = transitions[start].0;
            let end = start + transitions[start..].iter().take_while(|t| t.0 == p).count();
            let mut events: Vec<(usize, i32)> = Vec::new();
            for (_, l, _) in &transitions[start..end] {
                let (lo, hi) = l.bounds();
                events.push((lo, 1));
                events.push((hi + 1, -1));
                if let Some(e) = l.hole() {
                    events.push((e, -1));
                    events.push((e + 1, 1));
                }
            }
            events.sort_unstable();
            let mut depth = 0;
            for (i, &(x, d)) in events.iter().enumerate() {
                depth += d;
                if depth > 1 && events.get(i + 1).is_none_or(|e| e.0 != x) {
                    return invalid(format!("state {p} has two transitions on symbol {x}"));
                }
            }
            start = end;
        }
        let mut finals = finals;
        finals.sort_unstable();
        finals.dedup();
        Ok(GadgetDfa { num_states, alphabet_size, transitions, initial, finals })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn transitions(&self) -> &[(usize, Label, usize)] {
        &self.transitions
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &[usize] {
        &self.finals
    }

    pub fn step(&self, p: usize, a: usize) -> Option<usize> {
        let from = self.transitions.partition_point(|t| t.0 < p);
        self.transitions[from..].iter().take_while(|t| t.0 == p).find(|t| t.1.contains(a)).map(|t| t.2)
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut q = self.initial;
        for &a in word {
            match self.step(q, a) {
                Some(r) => q = r,
                None => return false,
            }
        }
        self.finals.binary_search(&q).is_ok()
    }

    /// The same DFA with every label replaced by its symbols.
    pub fn to_nfa(&self) -> Nfa {
        let edges =
            self.transitions.iter().flat_map(|&(p, l, q)| l.symbols().map(move |a| (p, a, q)).collect::<Vec<_>>());
        Nfa::new(self.num_states, self.alphabet_size, edges, [self.initial], self.finals.iter().copied())
            .expect("validated on construction")
    }
}

pub fn bits_per_symbol(alphabet_size: usize) -> u32 {
    alphabet_size.next_power_of_two().trailing_zeros().max(1)
}

/// Bits of each symbol, most significant first.
pub fn encode_word(word: &[usize], alphabet_size: usize) -> Vec<usize> {
    let h = bits_per_symbol(alphabet_size);
    word.iter().flat_map(|&a| (0..h).rev().map(move |i| (a >> i) & 1)).collect()
}

/// Binary DFA for a gadget DFA with concrete labels only: each state reads the bits of
/// its outgoing symbols through a binary tree. States of `d` keep their ids.
pub fn binary_encode(d: &GadgetDfa) -> Result<Nfa> {
    if let Some(t) = d.transitions.iter().find(|t| !t.1.is_concrete()) {
        return invalid(format!("transition ({},{:?},{}) is not a single symbol", t.0, t.1, t.2));
    }
    Ok(expand_wildcards(d))
}

/// Binary DFA for any gadget DFA. A label that covers a whole subtree of bit patterns
/// continues along a chain reading any remaining bits; chains are shared per
/// (target, remaining bits).
pub fn expand_wildcards(d: &GadgetDfa) -> Nfa {
    let h = bits_per_symbol(d.alphabet_size);
    let mut enc = Encoder { num_states: d.num_states, edges: Vec::new(), chains: HashMap::new() };
    let mut start = 0;
    while start < d.transitions.len() {
        let p = d.transitions[start].0;
        let end = start + d.transitions[start..].iter().take_while(|t| t.0 == p).count();
        let labels: Vec<(Label, usize)> = d.transitions[start..end].iter().map(|t| (t.1, t.2)).collect();
        enc.expand(p, 0, h, &labels);
        start = end;
    }
    Nfa::new(enc.num_states, 2, enc.edges, [d.initial], d.finals.iter().copied()).expect("ids in range")
}

struct Encoder {
    num_states: usize,
    edges: Vec<(usize, usize, usize)>,
    chains: HashMap<(usize, u32), usize>,
}

impl Encoder {
    fn fresh(&mut self) -> usize {
        self.num_states += 1;
        self.num_states - 1
    }

    /// State that reaches `target` after any `r` bits.
    fn chain(&mut self, target: usize, r: u32) -> usize {
        if r == 0 {
            return target;
        }
        if let Some(&z) = self.chains.get(&(target, r)) {
            return z;
        }
        let next = self.chain(target, r - 1);
        let z = self.fresh();
        self.edges.push((z, 0, next));
        self.edges.push((z, 1, next));
        self.chains.insert((target, r), z);
        z
    }

    /// `from` has read a prefix selecting the symbols `lo..lo + 2^r`.
    fn expand(&mut self, from: usize, lo: usize, r: u32, labels: &[(Label, usize)]) {
        let half = 1usize << (r - 1);
        for bit in 0..2 {
            let clo = lo + bit * half;
            let chi = clo + half - 1;
            let sub: Vec<(Label, usize)> = labels.iter().copied().filter(|l| l.0.meets(clo, chi)).collect();
            let Some(&(first, target)) = sub.first() else { continue };
            let next = if r == 1 {
                target
            } else if sub.len() == 1 && first.covers(clo, chi) {
                self.chain(target, r - 1)
            } else {
                let z = self.fresh();
                self.expand(z, clo, r - 1, &sub);
                z
            };
            self.edges.push((from, bit, next));
        }
    }
}
