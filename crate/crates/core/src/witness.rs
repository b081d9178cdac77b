//! Ambiguity classes and replayable certificates.

use serde::Serialize;

use crate::nfa::Nfa;

/// A word with two distinct accepting runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmbiguityWitness {
    pub word: Vec<usize>,
    pub runs: [Vec<usize>; 2],
}

impl AmbiguityWitness {
    pub fn replays(&self, a: &Nfa) -> bool {
        self.runs[0] != self.runs[1] && self.runs.iter().all(|r| a.is_accepting_run(&self.word, r))
    }
}

/// A state with two distinct cycles on the same non-empty word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdaWitness {
    pub state: usize,
    pub word: Vec<usize>,
    pub cycles: [Vec<usize>; 2],
}

impl EdaWitness {
    pub fn replays(&self, a: &Nfa) -> bool {
        let q = self.state;
        !self.word.is_empty()
            && self.cycles[0] != self.cycles[1]
            && self.cycles.iter().all(|c| a.is_run(&self.word, c) && c[0] == q && c[c.len() - 1] == q)
    }
}

/// States `p != q` and a word with runs `p -> p`, `p -> q` and `q -> q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdaWitness {
    pub p: usize,
    pub q: usize,
    pub word: Vec<usize>,
    pub runs: [Vec<usize>; 3],
}

impl IdaWitness {
    pub fn replays(&self, a: &Nfa) -> bool {
        let ends = [(self.p, self.p), (self.p, self.q), (self.q, self.q)];
        self.p != self.q
            && self
                .runs
                .iter()
                .zip(ends)
                .all(|(r, (from, to))| a.is_run(&self.word, r) && r[0] == from && r[r.len() - 1] == to)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AmbiguityClass {
    Unambiguous,
    FinitelyAmbiguous,
    PolynomiallyAmbiguous,
    ExponentiallyAmbiguous,
}

impl std::fmt::Display for AmbiguityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AmbiguityClass::Unambiguous => "unambiguous",
            AmbiguityClass::FinitelyAmbiguous => "finitely-ambiguous",
            AmbiguityClass::PolynomiallyAmbiguous => "polynomially-ambiguous",
            AmbiguityClass::ExponentiallyAmbiguous => "exponentially-ambiguous",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    TwoRuns(AmbiguityWitness),
    Ida(IdaWitness),
    Eda(EdaWitness),
}

/// A class together with the certificate matching it: none for unambiguous, two runs
/// for finitely ambiguous, IDA for polynomially ambiguous, EDA for exponentially
/// ambiguous automata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmbiguityVerdict {
    pub class: AmbiguityClass,
    pub witness: Option<Witness>,
}

impl AmbiguityVerdict {
    /// Whether the witness has the kind required by the class and replays on `a`.
    pub fn replays(&self, a: &Nfa) -> bool {
        match (self.class, &self.witness) {
            (AmbiguityClass::Unambiguous, None) => true,
            (AmbiguityClass::FinitelyAmbiguous, Some(Witness::TwoRuns(w))) => w.replays(a),
            (AmbiguityClass::PolynomiallyAmbiguous, Some(Witness::Ida(w))) => w.replays(a),
            (AmbiguityClass::ExponentiallyAmbiguous, Some(Witness::Eda(w))) => w.replays(a),
            _ => false,
        }
    }
}
