//! Slow reference implementations for differential testing. Nothing here calls into
//! the deciders it is compared against; small helpers such as trimming and strongly
//! connected components are rewritten locally in their simplest form.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::StGraph;
use crate::nfa::{Nfa, WeightedAutomaton};
use crate::progressions::ProgressionsInstance;
use crate::reductions::{LayeredGraph, OvInstance};
use crate::witness::AmbiguityClass;

/// Largest walk-length cap per vertex accepted by [`enumerate_walk_lengths`].
pub const WALK_CAP_PER_VERTEX: u64 = 10_000;
pub const MAX_TOTAL_STEP: u64 = 1_000;
pub const MAX_OV_WORK: u128 = 10_000_000;
pub const MAX_PRODUCT_STATES: usize = 1_000_000;
pub const MAX_TWINS_VERTICES: usize = 15;
pub const MAX_SIMPLE_CYCLES: usize = 1_000_000;
pub const MAX_MONOID_SIZE: usize = 2_000_000;

fn cap_exceeded<T>(msg: String) -> Result<T> {
    Err(Error::CapExceeded(msg))
}

/// Number of st-walks of every length up to a cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkLengthProfile {
    counts: Vec<BigUint>,
}

impl WalkLengthProfile {
    pub fn cap(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn count(&self, length: usize) -> &BigUint {
        &self.counts[length]
    }

    /// `(length, count)` for every length with at least one walk.
    pub fn nonzero(&self) -> Vec<(usize, BigUint)> {
        self.counts.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(l, c)| (l, c.clone())).collect()
    }

    /// Smallest length with two or more walks.
    pub fn first_repeated(&self) -> Option<usize> {
        let one = BigUint::from(1u8);
        self.counts.iter().position(|c| *c > one)
    }
}

/// Exact st-walk counts for lengths `0..=cap`, by iterating the per-vertex count vector.
pub fn enumerate_walk_lengths(g: &StGraph, cap: usize) -> Result<WalkLengthProfile> {
    let n = g.num_vertices();
    if cap as u64 > WALK_CAP_PER_VERTEX * n.max(1) as u64 {
        return cap_exceeded(format!("walk-length cap {cap} above {WALK_CAP_PER_VERTEX} per vertex"));
    }
    if let Some(counts) = walk_counts_u128(g, cap) {
        return Ok(WalkLengthProfile { counts: counts.into_iter().map(BigUint::from).collect() });
    }
    let mut cur = vec![BigUint::zero(); n];
    cur[g.s()] = BigUint::from(1u8);
    let mut counts = Vec::with_capacity(cap + 1);
    for step in 0..=cap {
        counts.push(cur[g.t()].clone());
        if step == cap {
            break;
        }
        let mut next = vec![BigUint::zero(); n];
        for &(u, v) in g.edges() {
            if !cur[u].is_zero() {
                next[v] += &cur[u];
            }
        }
        cur = next;
    }
    Ok(WalkLengthProfile { counts })
}

fn walk_counts_u128(g: &StGraph, cap: usize) -> Option<Vec<u128>> {
    let mut cur = vec![0u128; g.num_vertices()];
    cur[g.s()] = 1;
    let mut counts = Vec::with_capacity(cap + 1);
    for step in 0..=cap {
        counts.push(cur[g.t()]);
        if step == cap {
            break;
        }
        let mut next = vec![0u128; cur.len()];
        for &(u, v) in g.edges() {
            next[v] = next[v].checked_add(cur[u])?;
        }
        cur = next;
    }
    Some(counts)
}

/// Smallest length `<= cap` with two st-walks, counting with saturation at 2.
pub fn repeated_walk_length(g: &StGraph, cap: usize) -> Option<usize> {
    let mut cur = vec![0u8; g.num_vertices()];
    cur[g.s()] = 1;
    for step in 0..=cap {
        if cur[g.t()] >= 2 {
            return Some(step);
        }
        let mut next = vec![0u8; cur.len()];
        for &(u, v) in g.edges() {
            next[v] = (next[v] + cur[u]).min(2);
        }
        cur = next;
    }
    None
}

/// Whether all progressions are pairwise disjoint, by listing the values of each
/// progression up to the lcm of the two steps plus the larger base.
pub fn naive_dp_disjoint(inst: &ProgressionsInstance) -> Result<bool> {
    if inst.total_step() > MAX_TOTAL_STEP {
        return cap_exceeded(format!("total step {} above {MAX_TOTAL_STEP}", inst.total_step()));
    }
    let progs: Vec<(usize, u64, u64)> =
        inst.entries().iter().enumerate().flat_map(|(i, (b, bases))| bases.iter().map(move |&a| (i, a, *b))).collect();
    for (x, &(i, a, b)) in progs.iter().enumerate() {
        for &(j, c, d) in &progs[x + 1..] {
            if i == j {
                continue;
            }
            let lcm = b * d / simple_gcd(b, d);
            let bound = lcm + a.max(c);
            let mut v = a;
            while v <= bound {
                if v >= c && (v - c) % d == 0 {
                    return Ok(false);
                }
                v += b;
            }
        }
    }
    Ok(true)
}

fn simple_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        simple_gcd(b, a % b)
    }
}

/// `{a mod d : a in A}` for every divisor `d` of `n`, by trial division.
pub fn naive_mod_sets(a: &[u64], n: u64) -> Vec<(u64, Vec<u64>)> {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| {
            let mut s: Vec<u64> = a.iter().map(|x| x % d).collect();
            s.sort_unstable();
            s.dedup();
            (d, s)
        })
        .collect()
}

/// Whether one vector per set can be chosen with no coordinate set in all of them.
pub fn naive_ov(ov: &OvInstance) -> Result<bool> {
    let (k, n, d) = (ov.k(), ov.n(), ov.d());
    let work = (n as u128).checked_pow(k as u32).map(|t| t * d.max(1) as u128);
    if work.is_none_or(|w| w > MAX_OV_WORK) {
        return cap_exceeded(format!("{n}^{k} tuples of dimension {d}"));
    }
    let mut choice = vec![0usize; k];
    loop {
        let orthogonal = (0..d).all(|c| (0..k).any(|i| !ov.sets()[i][choice[i]][c]));
        if orthogonal {
            return Ok(true);
        }
        let mut i = 0;
        while i < k && choice[i] == n - 1 {
            choice[i] = 0;
            i += 1;
        }
        if i == k {
            return Ok(false);
        }
        choice[i] += 1;
    }
}

/// Whether all automata accept a common word, by breadth-first search over state tuples.
pub fn naive_intersection(automata: &[Nfa]) -> Result<bool> {
    if automata.is_empty() {
        return Ok(true);
    }
    let sigma = automata.iter().map(Nfa::alphabet_size).max().unwrap();
    let succ: Vec<HashMap<(usize, usize), Vec<usize>>> = automata
        .iter()
        .map(|a| {
            let mut m: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
            for &(p, x, q) in a.transitions() {
                m.entry((p, x)).or_default().push(q);
            }
            m
        })
        .collect();
    let accepting = |t: &[usize]| t.iter().zip(automata).all(|(&q, a)| a.is_final(q));
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut starts: Vec<Vec<usize>> = vec![Vec::new()];
    for a in automata {
        starts =
            starts.into_iter().flat_map(|t| a.initial().iter().map(move |&q| [t.clone(), vec![q]].concat())).collect();
    }
    for t in starts {
        if seen.insert(t.clone()) {
            queue.push_back(t);
        }
    }
    while let Some(t) = queue.pop_front() {
        if accepting(&t) {
            return Ok(true);
        }
        for x in 0..sigma {
            let mut next: Vec<Vec<usize>> = vec![Vec::new()];
            for (i, &q) in t.iter().enumerate() {
                let Some(targets) = succ[i].get(&(q, x)) else {
                    next.clear();
                    break;
                };
                next = next
                    .into_iter()
                    .flat_map(|p| targets.iter().map(move |&r| [p.clone(), vec![r]].concat()))
                    .collect();
            }
            for u in next {
                if seen.insert(u.clone()) {
                    if seen.len() > MAX_PRODUCT_STATES {
                        return cap_exceeded(format!("more than {MAX_PRODUCT_STATES} product states"));
                    }
                    queue.push_back(u);
                }
            }
        }
    }
    Ok(false)
}

/// Whether the layered graph has a cycle through all `k` layers, by depth-first search
/// from every vertex of layer 0.
pub fn naive_kcycle(g: &LayeredGraph) -> bool {
    let (k, n) = (g.k(), g.n());
    let mut out = vec![vec![Vec::new(); n]; k];
    for &(l, i, j) in g.edges() {
        out[l][i].push(j);
    }
    fn search(out: &[Vec<Vec<usize>>], layer: usize, v: usize, start: usize) -> bool {
        if layer == out.len() {
            return v == start;
        }
        out[layer][v].iter().any(|&w| search(out, layer + 1, w, start))
    }
    (0..n).any(|start| search(&out, 0, start, start))
}

/// `ok[v]`: `v` reachable from a source and reaching a target.
fn useful(n: usize, edges: &[(usize, usize)], sources: &[usize], targets: &[usize]) -> Vec<bool> {
    let reach = |adj: &Vec<Vec<usize>>, from: &[usize]| {
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = from.to_vec();
        while let Some(v) = stack.pop() {
            if !seen[v] {
                seen[v] = true;
                stack.extend(&adj[v]);
            }
        }
        seen
    };
    let mut fwd = vec![Vec::new(); n];
    let mut bwd = vec![Vec::new(); n];
    for &(u, v) in edges {
        fwd[u].push(v);
        bwd[v].push(u);
    }
    let a = reach(&fwd, sources);
    let b = reach(&bwd, targets);
    (0..n).map(|v| a[v] && b[v]).collect()
}

/// Twins property of a unary weighted graph: after trimming, all simple cycles must
/// have the same average weight. Any two cyclic components of a trim unary graph
/// contain siblings, and every cycle splits into simple cycles.
pub fn naive_unary_twins(g: &StGraph) -> Result<bool> {
    let n = g.num_vertices();
    if n > MAX_TWINS_VERTICES {
        return cap_exceeded(format!("{n} vertices, at most {MAX_TWINS_VERTICES}"));
    }
    let ok = useful(n, g.edges(), &[g.s()], &[g.t()]);
    let mut out: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (u, v, w) in g.weighted_edges() {
        if ok[u] && ok[v] {
            out[u].push((v, w));
        }
    }
    // (length, weight) of every simple cycle whose least vertex is `start`.
    let mut cycles: Vec<(i128, i128)> = Vec::new();
    for start in 0..n {
        let mut on_path = vec![false; n];
        let mut stack = vec![(start, 0usize, 0i128, 0i128)];
        on_path[start] = true;
        while let Some(&mut (v, ref mut next, len, weight)) = stack.last_mut() {
            if *next == out[v].len() {
                on_path[v] = false;
                stack.pop();
                continue;
            }
            let (w, ew) = out[v][*next];
            *next += 1;
            if w == start {
                cycles.push((len + 1, weight + ew as i128));
                if cycles.len() > MAX_SIMPLE_CYCLES {
                    return cap_exceeded(format!("more than {MAX_SIMPLE_CYCLES} simple cycles"));
                }
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                stack.push((w, 0, len + 1, weight + ew as i128));
            }
        }
    }
    Ok(cycles.windows(2).all(|c| c[0].1 * c[1].0 == c[1].1 * c[0].0))
}

/// Twins property of any weighted automaton. Pairs of states reachable on a common
/// word form a square graph whose edges carry the difference of the two weights; the
/// property holds iff every cycle of that graph has weight 0, checked with a
/// potential on each strongly connected component.
pub fn naive_twins(w: &WeightedAutomaton) -> Result<bool> {
    let a = w.nfa();
    let n = a.num_states();
    let plain: Vec<(usize, usize)> = a.transitions().iter().map(|t| (t.0, t.2)).collect();
    let ok = useful(n, &plain, a.initial(), a.finals());
    let mut succ: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); n];
    for (p, x, q, wt) in w.weighted_transitions() {
        if ok[p] && ok[q] {
            succ[p].push((x, q, wt));
        }
    }
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut edges: Vec<(usize, usize, i64)> = Vec::new();
    for &p in a.initial() {
        for &q in a.initial() {
            if ok[p] && ok[q] && !ids.contains_key(&(p, q)) {
                ids.insert((p, q), pairs.len());
                pairs.push((p, q));
            }
        }
    }
    let mut head = 0;
    while head < pairs.len() {
        let (p, q) = pairs[head];
        for &(x, p2, w1) in &succ[p] {
            for &(_, q2, w2) in succ[q].iter().filter(|t| t.0 == x) {
                let next = match ids.get(&(p2, q2)) {
                    Some(&i) => i,
                    None => {
                        if pairs.len() >= MAX_PRODUCT_STATES {
                            return cap_exceeded(format!("more than {MAX_PRODUCT_STATES} state pairs"));
                        }
                        ids.insert((p2, q2), pairs.len());
                        pairs.push((p2, q2));
                        pairs.len() - 1
                    }
                };
                edges.push((head, next, w1 - w2));
            }
        }
        head += 1;
    }
    Ok(all_cycles_zero(pairs.len(), &edges))
}

/// Whether every cycle has weight 0: components by two depth-first passes, then a
/// potential per component.
fn all_cycles_zero(n: usize, edges: &[(usize, usize, i64)]) -> bool {
    let mut out = vec![Vec::new(); n];
    let mut inc = vec![Vec::new(); n];
    for &(u, v, w) in edges {
        out[u].push((v, w));
        inc[v].push(u);
    }
    // Finishing order on the graph, then components on the reverse graph.
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![(root, 0usize)];
        while let Some((v, i)) = stack.pop() {
            if i < out[v].len() {
                stack.push((v, i + 1));
                let w = out[v][i].0;
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
            }
        }
    }
    const NONE: usize = usize::MAX;
    let mut comp = vec![NONE; n];
    for &root in order.iter().rev() {
        if comp[root] != NONE {
            continue;
        }
        comp[root] = root;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &u in &inc[v] {
                if comp[u] == NONE {
                    comp[u] = root;
                    stack.push(u);
                }
            }
        }
    }
    let mut potential: Vec<Option<i128>> = vec![None; n];
    for root in 0..n {
        if potential[root].is_some() {
            continue;
        }
        potential[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let pu = potential[u].unwrap();
            for &(v, w) in &out[u] {
                if comp[v] != comp[u] {
                    continue;
                }
                match potential[v] {
                    None => {
                        potential[v] = Some(pu + w as i128);
                        queue.push_back(v);
                    }
                    Some(pv) if pv != pu + w as i128 => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// Ambiguity class computed from the transition monoid over the useful states, with
/// run counts saturated at 2. Exact, but exponential in the worst case.
pub fn naive_class(a: &Nfa) -> Result<AmbiguityClass> {
    let plain: Vec<(usize, usize)> = a.transitions().iter().map(|t| (t.0, t.2)).collect();
    let ok = useful(a.num_states(), &plain, a.initial(), a.finals());
    let keep: Vec<usize> = (0..a.num_states()).filter(|&q| ok[q]).collect();
    let n = keep.len();
    if n == 0 {
        return Ok(AmbiguityClass::Unambiguous);
    }
    let local: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let mut letters = vec![vec![0u8; n * n]; a.alphabet_size()];
    for &(p, x, q) in a.transitions() {
        if let (Some(&i), Some(&j)) = (local.get(&p), local.get(&q)) {
            letters[x][i * n + j] = 1;
        }
    }
    let times = |m: &[u8], l: &[u8]| -> Vec<u8> {
        let mut r = vec![0u8; n * n];
        for i in 0..n {
            for k in 0..n {
                if m[i * n + k] == 0 {
                    continue;
                }
                for j in 0..n {
                    let add = m[i * n + k] * l[k * n + j];
                    r[i * n + j] = (r[i * n + j] + add).min(2);
                }
            }
        }
        r
    };
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue: VecDeque<Vec<u8>> = VecDeque::new();
    for l in &letters {
        if seen.insert(l.clone()) {
            queue.push_back(l.clone());
        }
    }
    let initial: Vec<usize> = a.initial().iter().filter_map(|q| local.get(q).copied()).collect();
    let finals: Vec<usize> = a.finals().iter().filter_map(|q| local.get(q).copied()).collect();
    let both = initial.iter().filter(|i| finals.contains(i)).count();
    let (mut ambiguous, mut eda, mut ida) = (both >= 2, false, false);
    while let Some(m) = queue.pop_front() {
        let runs: u32 =
            initial.iter().flat_map(|&i| finals.iter().map(move |&f| (i, f))).map(|(i, f)| m[i * n + f] as u32).sum();
        ambiguous |= runs >= 2;
        eda |= (0..n).any(|p| m[p * n + p] == 2);
        ida |= (0..n).any(|p| m[p * n + p] > 0 && (0..n).any(|q| q != p && m[p * n + q] > 0 && m[q * n + q] > 0));
        for l in &letters {
            let next = times(&m, l);
            if !seen.contains(&next) {
                if seen.len() >= MAX_MONOID_SIZE {
                    return cap_exceeded(format!("transition monoid above {MAX_MONOID_SIZE} elements"));
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(if eda {
        AmbiguityClass::ExponentiallyAmbiguous
    } else if ida {
        AmbiguityClass::PolynomiallyAmbiguous
    } else if ambiguous {
        AmbiguityClass::FinitelyAmbiguous
    } else {
        AmbiguityClass::Unambiguous
    })
}
