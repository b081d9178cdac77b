//! Cycles in layered graphs to intersection of two DFAs.

use serde::Serialize;

use crate::error::{invalid, Result};

use super::gadget::{GadgetDfa, Label};

/// `k` layers of `n` vertices; edge `(l, i, j)` goes from vertex `i` of layer `l` to
/// vertex `j` of layer `l + 1 mod k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeredGraph {
    k: usize,
    n: usize,
    edges: Vec<(usize, usize, usize)>,
}

impl LayeredGraph {
    pub fn new(k: usize, n: usize, mut edges: Vec<(usize, usize, usize)>) -> Result<LayeredGraph> {
        if k < 2 || n == 0 {
            return invalid(format!("need at least 2 layers of at least 1 vertex, got {k} x {n}"));
        }
        if let Some(e) = edges.iter().find(|e| e.0 >= k || e.1 >= n || e.2 >= n) {
            return invalid(format!("edge {e:?} out of range"));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(LayeredGraph { k, n, edges })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }
}

/// Two DFAs over the vertex indices `0..n` whose common words `j_0 j_1 ... j_k` are
/// exactly the k-cycles `(j_0, ..., j_{k-1})` with `j_k = j_0`. The first follows the
/// edges, the second checks that the last index repeats the first.
pub fn kcycle_to_2ie(g: &LayeredGraph) -> (GadgetDfa, GadgetDfa) {
    let (k, n) = (g.k(), g.n());
    // State 0 is initial, then n states per position 0..=k.
    let at = |pos: usize, j: usize| 1 + pos * n + j;
    let size = 1 + (k + 1) * n;
    let finals: Vec<usize> = (0..n).map(|j| at(k, j)).collect();

    let mut walk: Vec<_> = (0..n).map(|j| (0, Label::Symbol(j), at(0, j))).collect();
    walk.extend(g.edges().iter().map(|&(l, i, j)| (at(l, i), Label::Symbol(j), at(l + 1, j))));

    let mut closing: Vec<_> = (0..n).map(|j| (0, Label::Symbol(j), at(0, j))).collect();
    for j in 0..n {
        closing.extend((0..k - 1).map(|pos| (at(pos, j), Label::any(n), at(pos + 1, j))));
        closing.push((at(k - 1, j), Label::Symbol(j), at(k, j)));
    }
    (
        GadgetDfa::new(size, n, walk, 0, finals.clone()).expect("deterministic by construction"),
        GadgetDfa::new(size, n, closing, 0, finals).expect("deterministic by construction"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn three_layer_cycle_word() {
        let (d1, d2) = kcycle_to_2ie(&fixtures::three_layer_graph());
        assert!(d1.accepts(&[1, 1, 0, 1]));
        assert!(d2.accepts(&[1, 1, 0, 1]));
        assert!(!d1.accepts(&[0, 0, 1, 0]) || !d2.accepts(&[0, 0, 1, 0]));
        assert!(d2.accepts(&[0, 1, 1, 0]));
    }

    #[test]
    fn edgeless_graph_walks_nowhere() {
        let (d1, _) = kcycle_to_2ie(&LayeredGraph::new(3, 2, vec![]).unwrap());
        assert!(d1.transitions().len() == 2);
    }
}
