//! Orthogonal vectors to intersection of DFAs.

use serde::Serialize;

use crate::error::{invalid, Result};

use super::gadget::{GadgetDfa, Label};

/// `k` sets of `n` bit-vectors of dimension `d`. The question is whether one vector per
/// set can be chosen so that no coordinate is 1 in all of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OvInstance {
    k: usize,
    d: usize,
    sets: Vec<Vec<Vec<bool>>>,
}

impl OvInstance {
    pub fn new(k: usize, d: usize, sets: Vec<Vec<Vec<bool>>>) -> Result<OvInstance> {
        if k == 0 || sets.len() != k {
            return invalid(format!("expected {k} > 0 sets, found {}", sets.len()));
        }
        let n = sets[0].len();
        if n == 0 || sets.iter().any(|s| s.len() != n) {
            return invalid("sets must be non-empty and of equal size");
        }
        if d == 0 {
            return invalid("vectors must have dimension at least 1");
        }
        if sets.iter().flatten().any(|v| v.len() != d) {
            return invalid(format!("vectors must have dimension {d}"));
        }
        Ok(OvInstance { k, d, sets })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.sets[0].len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sets(&self) -> &[Vec<Vec<bool>>] {
        &self.sets
    }
}

/// One DFA per set; their languages intersect iff the instance has a solution.
///
/// Words have the form `j_1 ... j_k c_1 ... c_d`: the vector index chosen from each set
/// (symbols `1..=n`), then for every coordinate the set responsible for a 0 there
/// (symbols `1..=k`). DFA `i` checks its own choice and that it is only named
/// responsible where its vector has a 0. Symbol 0 is unused.
pub fn kov_to_kie(ov: &OvInstance) -> Vec<GadgetDfa> {
    let (k, n, d) = (ov.k(), ov.n(), ov.d());
    let sigma = n.max(k) + 1;
    let vectors = Label::Range { lo: 1, hi: n };
    let owners = Label::Range { lo: 1, hi: k };
    (1..=k)
        .map(|i| {
            // Prefix states 0..i, then per vector j the states after position i..=k,
            // then the d coordinate states per vector.
            let span = k - i + 1;
            let after = |j: usize, pos: usize| i + (j - 1) * span + (pos - i);
            let y_base = i + n * span;
            let coord = |j: usize, l: usize| if l == 0 { after(j, k) } else { y_base + (j - 1) * d + (l - 1) };
            let mut t = Vec::new();
            for pos in 1..i {
                t.push((pos - 1, vectors, pos));
            }
            for (j0, v) in ov.sets()[i - 1].iter().enumerate() {
                let j = j0 + 1;
                t.push((i - 1, Label::Symbol(j), after(j, i)));
                for pos in i + 1..=k {
                    t.push((after(j, pos - 1), vectors, after(j, pos)));
                }
                for (l, &bit) in v.iter().enumerate() {
                    let label = if bit { Label::RangeExcept { lo: 1, hi: k, except: i } } else { owners };
                    t.push((coord(j, l), label, coord(j, l + 1)));
                }
            }
            let finals = (1..=n).map(|j| coord(j, d)).collect();
            GadgetDfa::new(y_base + n * d, sigma, t, 0, finals).expect("deterministic by construction")
        })
        .collect()
}
