//! Rewrites every cycle so that it is entered and left only through one gate vertex,
//! keeping the number of st-walks of every length.

use serde::Serialize;

use crate::graph::{trim_graph, StGraph};

use super::cycles::{disjoint_cycles, Cycles};
use super::EqualLengthWalks;

/// Where a vertex of the transformed graph comes from. `index` is the position on the
/// cycle counted from the gate along the cycle direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VertexTag {
    Original(usize),
    /// On the path into the gate; stands for the cycle vertex at `index`.
    Incoming {
        gate: usize,
        index: usize,
    },
    /// On the path out of the gate; stands for the cycle vertex at `index`.
    Outgoing {
        gate: usize,
        index: usize,
    },
}

#[derive(Clone, Debug)]
pub struct CycleGateGraph {
    /// Original vertices keep their ids; gateway vertices are appended.
    pub graph: StGraph,
    /// One gate per cycle.
    pub gates: Vec<usize>,
    /// Cycles in walking order starting at their gate.
    pub cycles: Vec<Vec<usize>>,
    pub tags: Vec<VertexTag>,
}

impl CycleGateGraph {
    /// The vertex of the input graph that `v` stands for.
    pub fn origin(&self, v: usize) -> usize {
        match self.tags[v] {
            VertexTag::Original(u) => u,
            VertexTag::Incoming { gate, index } | VertexTag::Outgoing { gate, index } => {
                let c = self.gates.iter().position(|&g| g == gate).expect("known gate");
                self.cycles[c][index]
            }
        }
    }
}

pub enum GateOutcome {
    Transformed(CycleGateGraph),
    /// `s` and `t` lie on one cycle, which is then the whole trim graph.
    Unambiguous,
    Ambiguous(EqualLengthWalks),
}

/// Trims `g`, checks that its cycles are disjoint and transforms it. Vertex ids of the
/// result refer to the trimmed graph; an input without st-walks is unambiguous.
pub fn cycle_gate_transform(g: &StGraph) -> GateOutcome {
    let Some(t) = trim_graph(g) else { return GateOutcome::Unambiguous };
    let g = &t.graph;
    match disjoint_cycles(g) {
        Err(w) => GateOutcome::Ambiguous(w.lift(&t.old_of_new)),
        Ok(cycles) => {
            if on_one_cycle(&cycles, g.s(), g.t()) {
                GateOutcome::Unambiguous
            } else {
                GateOutcome::Transformed(transform(g, &cycles))
            }
        }
    }
}

/// `s` and `t` on a common cycle, or `s = t` on none (then the graph is one vertex).
pub(crate) fn on_one_cycle(cycles: &Cycles, s: usize, t: usize) -> bool {
    let c = cycles.cycle_of[s];
    s == t || (c != usize::MAX && c == cycles.cycle_of[t])
}

/// The transformation proper, for a trim graph with disjoint cycles and `s`, `t` not on
/// a common cycle.
pub(crate) fn transform(g: &StGraph, cyc: &Cycles) -> CycleGateGraph {
    let n = g.num_vertices();
    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    for &(u, v) in g.edges() {
        outdeg[u] += 1;
        indeg[v] += 1;
    }
    let mut tags: Vec<VertexTag> = (0..n).map(VertexTag::Original).collect();
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(g.num_edges() * 2);
    let mut gates = Vec::with_capacity(cyc.cycles.len());
    let mut cycles = Vec::with_capacity(cyc.cycles.len());
    // Per vertex: (index on its cycle, id of the incoming-path vertex, id of the
    // outgoing-path vertex or NONE).
    const NONE: usize = usize::MAX;
    let mut position = vec![NONE; n];
    let mut incoming = vec![NONE; n];
    let mut outgoing = vec![NONE; n];
    for cycle in &cyc.cycles {
        // Any vertex can be the gate. An entry vertex saves the incoming path.
        let gate_at = cycle
            .iter()
            .position(|&v| v == g.s())
            .or_else(|| cycle.iter().position(|&v| v == g.t()))
            .or_else(|| cycle.iter().position(|&v| indeg[v] > 1))
            .unwrap_or(0);
        let rotated: Vec<usize> = cycle[gate_at..].iter().chain(&cycle[..gate_at]).copied().collect();
        let len = rotated.len();
        let gate = rotated[0];
        for (j, &v) in rotated.iter().enumerate() {
            position[v] = j;
        }
        for j in 0..len {
            edges.push((rotated[j], rotated[(j + 1) % len]));
        }
        let first_entry = (1..len).find(|&j| indeg[rotated[j]] > 1);
        let last_exit = (1..len).rev().find(|&j| outdeg[rotated[j]] > 1);
        if let Some(first) = first_entry {
            for j in first..len {
                incoming[rotated[j]] = tags.len();
                tags.push(VertexTag::Incoming { gate, index: j });
            }
            for j in first..len {
                let next = if j + 1 < len { incoming[rotated[j + 1]] } else { gate };
                edges.push((incoming[rotated[j]], next));
            }
        }
        if let Some(last) = last_exit {
            for j in 1..=last {
                outgoing[rotated[j]] = tags.len();
                tags.push(VertexTag::Outgoing { gate, index: j });
            }
            let mut prev = gate;
            for j in 1..=last {
                edges.push((prev, outgoing[rotated[j]]));
                prev = outgoing[rotated[j]];
            }
        }
        gates.push(gate);
        cycles.push(rotated);
    }
    let inner = |v: usize| position[v] != NONE && position[v] > 0;
    for &(u, v) in g.edges() {
        let same_cycle = cyc.cycle_of[u] != NONE && cyc.cycle_of[u] == cyc.cycle_of[v];
        if same_cycle {
            continue;
        }
        debug_assert!(!(inner(u) && inner(v)), "no edge joins two cycles");
        if inner(u) {
            edges.push((outgoing[u], v));
        } else if inner(v) {
            edges.push((u, incoming[v]));
            if outgoing[v] != NONE {
                edges.push((u, outgoing[v]));
            }
        } else {
            edges.push((u, v));
        }
    }
    let graph = StGraph::new(tags.len(), edges, g.s(), g.t()).expect("ids in range");
    CycleGateGraph { graph, gates, cycles, tags }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::enumerate_walk_lengths;

    fn transformed(g: &StGraph) -> CycleGateGraph {
        match cycle_gate_transform(g) {
            GateOutcome::Transformed(c) => c,
            _ => panic!("expected a transformation"),
        }
    }

    #[test]
    fn acyclic_graph_is_unchanged() {
        let g = StGraph::new(3, [(0, 1), (1, 2), (0, 2)], 0, 2).unwrap();
        let c = transformed(&g);
        assert_eq!(c.graph, g);
        assert!(c.gates.is_empty());
    }

    /// The transformation keeps the number of st-walks of every length.
    fn same_walk_counts(g: &StGraph, c: &CycleGateGraph) {
        let before = enumerate_walk_lengths(g, 30).unwrap();
        let after = enumerate_walk_lengths(&c.graph, 30).unwrap();
        assert_eq!(before.nonzero(), after.nonzero());
    }

    #[test]
    fn cycle_with_side_entry_and_exit() {
        // s=0 -> 2 enters the 4-cycle 1 2 3 4; 3 -> t=5 leaves it.
        let g = StGraph::new(6, [(0, 2), (1, 2), (2, 3), (3, 4), (4, 1), (3, 5)], 0, 5).unwrap();
        let c = transformed(&g);
        // The entry vertex is the gate: no incoming path, an outgoing path of one vertex.
        assert_eq!(c.gates, vec![2]);
        assert_eq!(c.graph.num_vertices(), 6 + 1);
        let gate_edges_in = c.graph.edges().iter().filter(|e| e.1 == 2).count();
        let gate_edges_out = c.graph.edges().iter().filter(|e| e.0 == 2).count();
        assert_eq!((gate_edges_in, gate_edges_out), (2, 2));
        for v in [1, 3, 4] {
            let ins = c.graph.edges().iter().filter(|e| e.1 == v).count();
            let outs = c.graph.edges().iter().filter(|e| e.0 == v).count();
            assert_eq!((ins, outs), (1, 1));
        }
        for v in 0..c.graph.num_vertices() {
            let _ = c.origin(v);
        }
        same_walk_counts(&g, &c);
    }

    #[test]
    fn two_entries_need_an_incoming_path() {
        let g = StGraph::new(6, [(0, 2), (0, 4), (1, 2), (2, 3), (3, 4), (4, 1), (3, 5)], 0, 5).unwrap();
        let c = transformed(&g);
        assert!(c.gates == vec![2] || c.gates == vec![4]);
        assert!(c.tags.iter().any(|t| matches!(t, VertexTag::Incoming { .. })));
        same_walk_counts(&g, &c);
    }

    #[test]
    fn source_on_cycle_becomes_gate() {
        let g = StGraph::new(4, [(0, 1), (1, 2), (2, 0), (1, 3)], 0, 3).unwrap();
        let c = transformed(&g);
        assert_eq!(c.gates, vec![0]);
    }

    #[test]
    fn source_and_target_on_one_cycle() {
        let g = StGraph::new(3, [(0, 1), (1, 2), (2, 0)], 0, 1).unwrap();
        assert!(matches!(cycle_gate_transform(&g), GateOutcome::Unambiguous));
    }
}
