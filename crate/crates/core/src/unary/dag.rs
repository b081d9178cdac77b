//! Lengths of walks to the target in an acyclic trim st-graph, in linear time when the
//! graph is unambiguous.
//!
//! A BFS tree from `s` splits every walk into tree and non-tree edges. For every vertex
//! `v`, `jump[v]` holds the lengths of `vt`-walks starting with a non-tree edge. For
//! boundary vertices (in-degree at least 2, marked, `s`, `t`) the full set is kept; it
//! is assembled from the tree below `v` down to the next boundary vertices. Any length
//! produced twice for one vertex proves two equal-length st-walks.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graph::{trim_graph, StGraph};

use super::{walks_of_length, EqualLengthWalks, SPARSITY_FACTOR};

/// Walk lengths of an unambiguous acyclic trim graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DagWalkLengths {
    /// Lengths of all st-walks, increasing.
    pub p_st: Vec<u32>,
    /// For every vertex of in-degree at least 2, the lengths of its walks to `t`.
    pub p_vt: Vec<(usize, Vec<u32>)>,
}

#[derive(Clone, Debug)]
pub enum DagOutcome {
    Lengths(DagWalkLengths),
    Ambiguous(EqualLengthWalks),
}

/// Runs the walk-length computation on an acyclic trim graph. Errors if the graph has a
/// cycle or is not trim.
pub fn dag_walk_lengths(g: &StGraph) -> Result<DagOutcome> {
    match trim_graph(g) {
        Some(t) if t.graph.num_vertices() == g.num_vertices() => {}
        _ => return invalid("graph is not trim"),
    }
    let marked = vec![false; g.num_vertices()];
    match boundary_lengths(g, &marked, true)? {
        Ok(sets) => {
            let indeg = in_degrees(g);
            let mut p_vt = Vec::new();
            for (v, set) in sets.full.into_iter().enumerate() {
                if indeg[v] >= 2 {
                    let mut set = set.expect("in-degree 2 vertices are boundary");
                    set.sort_unstable();
                    p_vt.push((v, set));
                }
            }
            let mut p_st = sets.p_st;
            p_st.sort_unstable();
            Ok(DagOutcome::Lengths(DagWalkLengths { p_st, p_vt }))
        }
        Err(length) => {
            let length = match length {
                Some(l) => l,
                None => match boundary_lengths(g, &marked, false)? {
                    Err(Some(l)) => l,
                    _ => unreachable!("an unguarded run finds the collision"),
                },
            };
            let w = walks_of_length(g, length as u128).expect("collision length has two walks");
            Ok(DagOutcome::Ambiguous(w))
        }
    }
}

fn in_degrees(g: &StGraph) -> Vec<usize> {
    let mut indeg = vec![0; g.num_vertices()];
    for &(_, v) in g.edges() {
        indeg[v] += 1;
    }
    indeg
}

pub(crate) struct BoundarySets {
    pub p_st: Vec<u32>,
    /// Lengths of all `vt`-walks, for boundary vertices only; unordered.
    pub full: Vec<Option<Vec<u32>>>,
}

/// `Ok(sets)` if no two `vt`-walks of equal length exist for any vertex `v`; otherwise
/// `Err(Some(l))` with `l` the length of two distinct st-walks, or `Err(None)` when a
/// size guard tripped (`guards`) without naming a length.
///
/// `marked` vertices are treated as boundary vertices and get their full sets.
pub(crate) fn boundary_lengths(
    g: &StGraph,
    marked: &[bool],
    guards: bool,
) -> Result<std::result::Result<BoundarySets, Option<usize>>> {
    let n = g.num_vertices();
    let m = g.num_edges();
    let (s, t) = (g.s(), g.t());
    let adj = g.out_csr();
    let indeg = in_degrees(g);

    // BFS tree from s.
    const NONE: usize = usize::MAX;
    let mut parent = vec![NONE; n];
    let mut depth = vec![0usize; n];
    parent[s] = s;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &v in adj.neighbors(u) {
            if parent[v] == NONE {
                parent[v] = u;
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
        }
    }
    // Kahn order.
    let mut remaining = indeg.clone();
    let mut order: Vec<usize> = (0..n).filter(|&v| remaining[v] == 0).collect();
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &v in adj.neighbors(u) {
            remaining[v] -= 1;
            if remaining[v] == 0 {
                order.push(v);
            }
        }
    }
    if order.len() < n {
        return invalid("graph has a cycle");
    }
    if guards && m > SPARSITY_FACTOR * n {
        return Ok(Err(None));
    }
    let is_tree_edge = |u: usize, v: usize| parent[v] == u && v != s;
    let boundary: Vec<bool> = (0..n).map(|v| indeg[v] >= 2 || marked[v] || v == s || v == t).collect();
    let budget = 5 * n + 2;
    let mut stored = 0usize;

    let mut stamp = vec![0u32; n + 1];
    let mut now = 0u32;
    let mut jump: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut full: Vec<Option<Vec<u32>>> = vec![None; n];
    let mut stack: Vec<(usize, u32)> = Vec::new();

    for &v in order.iter().rev() {
        // Walks leaving v by a non-tree edge.
        now += 1;
        let mut jv = Vec::new();
        for &u in adj.neighbors(v) {
            if is_tree_edge(v, u) {
                continue;
            }
            let fu = full[u].as_ref().expect("non-tree edges end at boundary vertices");
            for &l in fu {
                let x = l + 1;
                if stamp[x as usize] == now {
                    return Ok(Err(Some(depth[v] + x as usize)));
                }
                stamp[x as usize] = now;
                jv.push(x);
            }
        }
        stored += jv.len();
        if guards && stored > budget {
            return Ok(Err(None));
        }
        if !boundary[v] {
            jump[v] = jv;
            continue;
        }
        // Full set: jump[v], then walks along tree edges down to the next boundary.
        now += 1;
        let mut fv = Vec::with_capacity(jv.len() + 1);
        let mut add = |x: u32, fv: &mut Vec<u32>| -> Option<usize> {
            if stamp[x as usize] == now {
                return Some(depth[v] + x as usize);
            }
            stamp[x as usize] = now;
            fv.push(x);
            None
        };
        for &x in &jv {
            add(x, &mut fv);
        }
        if v == t {
            add(0, &mut fv);
        }
        stack.clear();
        stack.extend(adj.neighbors(v).iter().filter(|&&c| is_tree_edge(v, c)).map(|&c| (c, 1)));
        while let Some((c, d)) = stack.pop() {
            let set = if boundary[c] { full[c].as_ref().unwrap() } else { &jump[c] };
            for &l in set {
                if let Some(hit) = add(l + d, &mut fv) {
                    return Ok(Err(Some(hit)));
                }
            }
            if !boundary[c] {
                stack.extend(adj.neighbors(c).iter().filter(|&&x| is_tree_edge(c, x)).map(|&x| (x, d + 1)));
            }
        }
        stored += fv.len() - jv.len();
        if guards && stored > budget {
            return Ok(Err(None));
        }
        full[v] = Some(fv);
    }
    let p_st = full[s].clone().expect("s is a boundary vertex");
    Ok(Ok(BoundarySets { p_st, full }))
}
