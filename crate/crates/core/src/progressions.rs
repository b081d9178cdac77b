//! Disjointness of arithmetic progressions `a + x*b` (x >= 0), decided through residues
//! modulo the gcd of the steps.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{invalid, Result};

/// Progressions grouped by step: entry `i` stands for `a + x * step_i` for each base `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProgressionsInstance {
    entries: Vec<(u64, Vec<u64>)>,
}

impl ProgressionsInstance {
    /// Steps must be positive and strictly increasing; bases must be distinct and below
    /// their step. Bases are sorted.
    pub fn new(entries: Vec<(u64, Vec<u64>)>) -> Result<ProgressionsInstance> {
        let mut prev = 0;
        let mut out = Vec::with_capacity(entries.len());
        for (b, mut bases) in entries {
            if b == 0 || b <= prev {
                return invalid(format!("steps must be positive and strictly increasing, got {b} after {prev}"));
            }
            prev = b;
            bases.sort_unstable();
            if let Some(&a) = bases.iter().find(|&&a| a >= b) {
                return invalid(format!("base {a} is not below its step {b}"));
            }
            if bases.windows(2).any(|w| w[0] == w[1]) {
                return invalid(format!("duplicate base for step {b}"));
            }
            out.push((b, bases));
        }
        Ok(ProgressionsInstance { entries: out })
    }

    pub fn entries(&self) -> &[(u64, Vec<u64>)] {
        &self.entries
    }

    /// Sum of the steps.
    pub fn total_step(&self) -> u64 {
        self.entries.iter().map(|e| e.0).sum()
    }

    pub fn num_progressions(&self) -> usize {
        self.entries.iter().map(|e| e.1.len()).sum()
    }
}

/// Binary GCD. `gcd(0, x) = x`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Whether `a + x*b` and `c + y*d` (x, y >= 0) share no value.
pub fn pair_disjoint(a: u64, b: u64, c: u64, d: u64) -> bool {
    let p = gcd(b, d);
    a % p != c % p
}

/// Smallest common value `v >= max(a, c)` of `a + x*b` and `c + y*d`, if any.
pub fn common_value(a: u64, b: u64, c: u64, d: u64) -> Option<u128> {
    let (ai, bi, ci, di) = (a as i128, b as i128, c as i128, d as i128);
    let (g, x, _) = ext_gcd(bi, di);
    if (ci - ai) % g != 0 {
        return None;
    }
    let m = bi / g * di;
    // v = a + b * t with b*t = c - a (mod d)  <=>  t = x * (c - a)/g (mod d/g)
    let dg = di / g;
    let t = ((ci - ai) / g % dg * (x % dg)).rem_euclid(dg);
    let mut v = (ai + bi * t).rem_euclid(m);
    let lo = ai.max(ci);
    if v < lo {
        v += (lo - v + m - 1) / m * m;
    }
    Some(v as u128)
}

/// Residue sets `{a mod d : a in A}` for every divisor `d` of `N`.
#[derive(Clone, Debug)]
pub struct DivisorModSets {
    modulus: u64,
    divisors: Vec<u64>,
    sets: Vec<Vec<u64>>,
    index: HashMap<u64, usize>,
}

impl DivisorModSets {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// All divisors of the modulus, increasing.
    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    /// The sorted residue set for divisor `d`, or `None` if `d` does not divide the modulus.
    pub fn get(&self, d: u64) -> Option<&[u64]> {
        self.index.get(&d).map(|&i| self.sets[i].as_slice())
    }
}

/// Prime factorization by trial division, as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Computes every residue set by walking the divisor lattice downwards from `N`: each
/// divisor is reduced from a parent that is larger by one prime factor.
pub fn precompute_mod_sets(a: &[u64], n: u64) -> Result<DivisorModSets> {
    if n == 0 {
        return invalid("modulus must be positive");
    }
    if let Some(&x) = a.iter().find(|&&x| x >= n) {
        return invalid(format!("element {x} is not below the modulus {n}"));
    }
    let primes: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
    let mut top: Vec<u64> = a.to_vec();
    top.sort_unstable();
    top.dedup();
    let mut index = HashMap::from([(n, 0usize)]);
    let mut divisors = vec![n];
    let mut sets = vec![top];
    let mut mark = vec![false; n as usize];
    let mut head = 0;
    while head < divisors.len() {
        let e = divisors[head];
        for &p in &primes {
            if e % p != 0 {
                continue;
            }
            let d = e / p;
            if index.contains_key(&d) {
                continue;
            }
            let mut child = Vec::new();
            for &z in &sets[head] {
                let r = z % d;
                if !mark[r as usize] {
                    mark[r as usize] = true;
                    child.push(r);
                }
            }
            for &r in &child {
                mark[r as usize] = false;
            }
            child.sort_unstable();
            index.insert(d, divisors.len());
            divisors.push(d);
            sets.push(child);
        }
        head += 1;
    }
    let mut order: Vec<usize> = (0..divisors.len()).collect();
    order.sort_unstable_by_key(|&i| divisors[i]);
    let divisors: Vec<u64> = order.iter().map(|&i| divisors[i]).collect();
    let sets: Vec<Vec<u64>> = order.iter().map(|&i| std::mem::take(&mut sets[i])).collect();
    let index = divisors.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    Ok(DivisorModSets { modulus: n, divisors, sets, index })
}

/// A value shared by two progressions from different entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub value: u128,
    /// (entry index, base) of each progression.
    pub first: (usize, u64),
    pub second: (usize, u64),
}

/// Whether all progressions are pairwise disjoint; otherwise a common value.
///
/// For each pair of entries the two base sets are compared modulo the gcd of their steps,
/// using precomputed residue sets and one stamped array sized by the largest step.
pub fn disjoint_progressions(inst: &ProgressionsInstance) -> (bool, Option<Collision>) {
    let entries = inst.entries();
    let mods: Vec<DivisorModSets> =
        entries.iter().map(|(b, bases)| precompute_mod_sets(bases, *b).expect("instance invariants")).collect();
    let max_step = entries.last().map_or(0, |e| e.0) as usize;
    let mut stamp = vec![0u32; max_step];
    let mut now = 0u32;
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            let p = gcd(entries[i].0, entries[j].0);
            let ri = mods[i].get(p).expect("gcd divides the step");
            let rj = mods[j].get(p).expect("gcd divides the step");
            now += 1;
            for &r in ri {
                stamp[r as usize] = now;
            }
            if let Some(&r) = rj.iter().find(|&&r| stamp[r as usize] == now) {
                return (false, Some(collision_at(inst, i, j, p, r)));
            }
        }
    }
    (true, None)
}

fn collision_at(inst: &ProgressionsInstance, i: usize, j: usize, p: u64, r: u64) -> Collision {
    let (bi, ai) = &inst.entries()[i];
    let (bj, aj) = &inst.entries()[j];
    let a = *ai.iter().find(|&&a| a % p == r).expect("residue comes from the base set");
    let c = *aj.iter().find(|&&c| c % p == r).expect("residue comes from the base set");
    let value = common_value(a, *bi, c, *bj).expect("equal residues modulo the gcd");
    Collision { value, first: (i, a), second: (j, c) }
}

/// Sum of the divisors of `n`.
pub fn sigma1(n: u64) -> u128 {
    factorize(n).into_iter().map(|(p, e)| (0..=e).map(|k| (p as u128).pow(k)).sum::<u128>()).product()
}

/// Number of divisors of `n`.
pub fn sigma0(n: u64) -> u64 {
    factorize(n).into_iter().map(|(_, e)| e as u64 + 1).product()
}

/// `sum over ordered pairs (a, b) of A x A of gcd(a, b)`, including `a = b`.
pub fn gcd_sum(a: &[u64]) -> u128 {
    let mut total = 0u128;
    for &x in a {
        for &y in a {
            total += gcd(x, y) as u128;
        }
    }
    total
}
