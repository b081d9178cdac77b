//! Unambiguity, EDA and IDA for unary automata, viewed as st-graphs.
//!
//! The unambiguity test removes cycles through gate vertices, computes walk lengths in
//! the remaining DAG, and reduces what is left to disjointness of arithmetic
//! progressions.

mod bridge;
mod cycles;
mod dag;
mod gate;
mod pipeline;

use serde::Serialize;

use crate::graph::StGraph;

pub use bridge::{progressions_to_graph, unary_to_progressions, ProgressionsOutcome, UnaryInstance};
pub use cycles::{check_disjoint_cycles, unary_has_eda, unary_has_ida};
pub use dag::{dag_walk_lengths, DagOutcome, DagWalkLengths};
pub use gate::{cycle_gate_transform, CycleGateGraph, GateOutcome, VertexTag};
pub use pipeline::{unary_classify, unary_decide, unary_is_unambiguous, UnaryDecision, SPARSITY_FACTOR};

/// Two distinct st-walks with the same number of edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualLengthWalks {
    pub walks: [Vec<usize>; 2],
}

impl EqualLengthWalks {
    /// Number of edges of each walk.
    pub fn length(&self) -> usize {
        self.walks[0].len() - 1
    }

    pub fn replays(&self, g: &StGraph) -> bool {
        self.walks[0] != self.walks[1]
            && self.walks[0].len() == self.walks[1].len()
            && self.walks.iter().all(|w| g.is_st_walk(w))
    }

    pub(crate) fn lift(self, old_of_new: &[usize]) -> EqualLengthWalks {
        let map = |w: Vec<usize>| w.into_iter().map(|v| old_of_new[v]).collect();
        let [a, b] = self.walks;
        EqualLengthWalks { walks: [map(a), map(b)] }
    }
}

/// Largest `(length + 1) * vertices` table [`walks_of_length`] will allocate.
pub const EXTRACTION_CELLS: u128 = 1 << 28;

/// Two distinct st-walks of exactly `length` edges, if they exist and the count table
/// fits [`EXTRACTION_CELLS`].
///
/// Counts of walks to `t`, saturated at 2, are tabulated per remaining length; the
/// walks share a prefix up to the first vertex where two successors can still finish.
pub fn walks_of_length(g: &StGraph, length: u128) -> Option<EqualLengthWalks> {
    let n = g.num_vertices();
    if (length + 1) * n as u128 > EXTRACTION_CELLS {
        return None;
    }
    let len = length as usize;
    let adj = g.out_csr();
    let mut count = vec![0u8; (len + 1) * n];
    count[g.t()] = 1;
    for k in 1..=len {
        let (done, row) = count.split_at_mut(k * n);
        let prev = &done[(k - 1) * n..];
        for v in 0..n {
            let c: u32 = adj.neighbors(v).iter().map(|&w| prev[w] as u32).sum();
            row[v] = c.min(2) as u8;
        }
    }
    let at = |k: usize, v: usize| count[k * n + v];
    if at(len, g.s()) < 2 {
        return None;
    }
    let follow_any = |mut v: usize, mut k: usize, walk: &mut Vec<usize>| {
        while k > 0 {
            v = *adj.neighbors(v).iter().find(|&&w| at(k - 1, w) > 0).expect("count is positive");
            walk.push(v);
            k -= 1;
        }
    };
    let mut prefix = vec![g.s()];
    let mut v = g.s();
    let mut k = len;
    loop {
        let live: Vec<usize> = adj.neighbors(v).iter().copied().filter(|&w| at(k - 1, w) > 0).collect();
        if live.len() >= 2 {
            let mut a = prefix.clone();
            a.push(live[0]);
            follow_any(live[0], k - 1, &mut a);
            let mut b = prefix;
            b.push(live[1]);
            follow_any(live[1], k - 1, &mut b);
            return Some(EqualLengthWalks { walks: [a, b] });
        }
        v = live[0];
        prefix.push(v);
        k -= 1;
    }
}
