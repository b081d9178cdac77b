//! Small hand-made instances with known answers, shared by tests, the CLI `verify`
//! command and the documentation.

use crate::graph::StGraph;
use crate::nfa::Nfa;
use crate::progressions::ProgressionsInstance;
use crate::reductions::{LayeredGraph, OvInstance};

/// Unambiguous automaton for `(0+1)* 1 (0+1)^2`.
pub fn a1() -> Nfa {
    Nfa::new(4, 2, [(0, 0, 0), (0, 1, 0), (0, 1, 1), (1, 0, 2), (1, 1, 2), (2, 0, 3), (2, 1, 3)], [0], [3]).unwrap()
}

/// Symbols of [`a2`] and [`a3`]: `0`, `1` and the separator `#` (= 2).
pub const HASH: usize = 2;

/// Exponentially ambiguous automaton: `(0#)^(n-1) 0` has `2^n` accepting runs.
pub fn a2() -> Nfa {
    Nfa::new(3, 3, [(0, 0, 1), (0, 0, 2), (1, 0, 1), (2, 1, 2), (1, HASH, 0), (2, HASH, 0)], [0], [1, 2]).unwrap()
}

/// Finitely ambiguous automaton for `01* + 00*`, with two runs on `0` only.
pub fn a3() -> Nfa {
    Nfa::new(3, 3, [(0, 0, 1), (0, 0, 2), (1, 0, 1), (2, 1, 2)], [0], [1, 2]).unwrap()
}

/// Unary, polynomially ambiguous: a 2-cycle at the initial state feeding a 3-cycle at
/// the final state.
pub fn a4() -> Nfa {
    Nfa::new(5, 1, [(0, 0, 1), (1, 0, 0), (0, 0, 2), (2, 0, 3), (3, 0, 4), (4, 0, 2)], [0], [2]).unwrap()
}

/// Chain `v1 -> ... -> v5` plus shortcuts `vi -> v5`; walk lengths 1..=4, one each.
pub fn shortcut_chain() -> StGraph {
    let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 4)];
    edges.extend([(0, 4), (1, 4), (2, 4)]);
    StGraph::new(5, edges, 0, 4).unwrap()
}

/// Two branches with disjoint cycles: a 2-cycle at `v4` and a 3-cycle at `v2`.
/// Vertex ids: s=0, v1=1, v2=2, v3=3, v4=4, t=5, three cycle helpers 6, 7, 8.
/// With `direct` the extra edge `s -> t` is added.
pub fn two_cycle_branches(direct: bool) -> StGraph {
    let mut edges =
        vec![(0, 1), (0, 2), (1, 2), (1, 3), (3, 4), (4, 5), (2, 5), (4, 8), (8, 4), (2, 6), (6, 7), (7, 2)];
    if direct {
        edges.push((0, 5));
    }
    StGraph::new(9, edges, 0, 5).unwrap()
}

/// Progressions read off [`two_cycle_branches`]: step 2 with base 0, step 3 with bases 0, 2.
pub fn two_cycle_progressions() -> ProgressionsInstance {
    ProgressionsInstance::new(vec![(2, vec![0]), (3, vec![0, 2])]).unwrap()
}

/// Two siblings `p` and `q` with self-loops of weights `y1` and `y2`.
/// Vertex ids: s=0, p=1, q=2, t=3.
pub fn sibling_gadget(x1: i64, x2: i64, y1: i64, y2: i64) -> StGraph {
    StGraph::new_weighted(4, [(0, 1, x1), (0, 2, x2), (1, 1, y1), (2, 2, y2), (1, 3, 0), (2, 3, 0)], 0, 3).unwrap()
}

/// Three layers `a`, `b`, `c` of two vertices with exactly one 3-cycle `(a1, b1, c0)`.
pub fn three_layer_graph() -> LayeredGraph {
    LayeredGraph::new(3, 2, vec![(0, 0, 0), (0, 1, 1), (1, 1, 1), (1, 1, 0), (2, 1, 0), (2, 0, 1)]).unwrap()
}

/// 2-OV instance with the orthogonal pair `0110`, `0001`.
pub fn small_ov() -> OvInstance {
    let parse = |s: &str| s.bytes().map(|b| b == b'1').collect::<Vec<bool>>();
    OvInstance::new(
        2,
        4,
        vec![vec![parse("0010"), parse("0110"), parse("1111")], vec![parse("0001"), parse("0101"), parse("1110")]],
    )
    .unwrap()
}

/// Symbols of [`aa_triple`]: `a` = 0, `b` = 1.
pub fn aa_triple() -> [Nfa; 3] {
    // aa exactly; a a a*; (aa)+ with b as a dead letter everywhere.
    let d1 = Nfa::new(3, 2, [(0, 0, 1), (1, 0, 2)], [0], [2]).unwrap();
    let d2 = Nfa::new(3, 2, [(0, 0, 1), (1, 0, 2), (2, 0, 2)], [0], [2]).unwrap();
    let d3 = Nfa::new(3, 2, [(0, 0, 1), (1, 0, 2), (2, 0, 1), (0, 1, 0)], [0], [2]).unwrap();
    [d1, d2, d3]
}

/// Automaton with two accepting runs on `aba` (a = 0, b = 1):
/// `qI -a-> x -b-> y -a-> qF` and `qI -a-> x -b-> qF -a-> qF`, with ids qI=0, x=1, y=2, qF=3.
pub fn aba_two_runs() -> Nfa {
    Nfa::new(4, 2, [(0, 0, 1), (1, 1, 2), (2, 0, 3), (1, 1, 3), (3, 0, 3)], [0], [3]).unwrap()
}
