//! Closure of matrices in `SL_2(F_p)` and `SL_3(F_p)` by breadth-first
//! search.

use std::collections::HashSet;

use super::GenericityError;
use crate::exactnum::rational::{is_prime, mulmod, rational_mod_p};
use crate::exactnum::MatrixQ;

/// Largest group order the search will attempt.
pub const MAX_GROUP_ORDER: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationReport {
    pub prime: u64,
    pub dim: usize,
    pub closure_order: u64,
    pub group_order: u64,
    pub generates: bool,
}

/// `|SL_n(F_p)| = p^(n(n-1)/2) * prod_{k=2..n} (p^k - 1)`.
pub fn sl_order(n: usize, p: u64) -> u128 {
    let p = p as u128;
    let mut acc = p.pow((n * (n - 1) / 2) as u32);
    for k in 2..=n {
        acc *= p.pow(k as u32) - 1;
    }
    acc
}

fn encode(m: &[u64], p: u64) -> u64 {
    m.iter().fold(0u64, |acc, &x| acc * p + x)
}

fn mul(a: &[u64], b: &[u64], n: usize, p: u64) -> Vec<u64> {
    let mut c = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0u64;
            for k in 0..n {
                s = (s + mulmod(a[i * n + k], b[k * n + j], p)) % p;
            }
            c[i * n + j] = s;
        }
    }
    c
}

fn det_mod(m: &[u64], n: usize, p: u64) -> u64 {
    match n {
        2 => (mulmod(m[0], m[3], p) + p - mulmod(m[1], m[2], p)) % p,
        _ => {
            let minor = |a: usize, b: usize, c: usize, d: usize| {
                (mulmod(m[a], m[d], p) + p - mulmod(m[b], m[c], p)) % p
            };
            let t0 = mulmod(m[0], minor(4, 5, 7, 8), p);
            let t1 = mulmod(m[1], minor(3, 5, 6, 8), p);
            let t2 = mulmod(m[2], minor(3, 4, 6, 7), p);
            (t0 + p - t1 + t2) % p
        }
    }
}

/// Whether the reductions mod `p` generate all of `SL_n(F_p)`, `n` in
/// {2, 3}. The closure under right multiplication by generators is the
/// generated subgroup because the group is finite.
pub fn generates_mod_p(generators: &[MatrixQ], p: u64) -> Result<GenerationReport, GenericityError> {
    if p < 5 || !is_prime(p) {
        return Err(GenericityError::BadPrime(p));
    }
    let n = generators.first().map_or(0, |g| g.rows());
    if !(n == 2 || n == 3) || generators.iter().any(|g| !g.is_square() || g.rows() != n) {
        return Err(GenericityError::UnsupportedGroup(
            "generation mod p is decided for SL2 and SL3 only".into(),
        ));
    }
    let order = sl_order(n, p);
    if order > MAX_GROUP_ORDER as u128 {
        return Err(GenericityError::UnsupportedGroup(format!(
            "|SL{n}(F_{p})| = {order} exceeds the search limit"
        )));
    }
    let order = order as u64;
    let mut gens = Vec::new();
    for g in generators {
        let red = g
            .entries()
            .iter()
            .map(|q| rational_mod_p(q, p))
            .collect::<Option<Vec<u64>>>()
            .ok_or(GenericityError::BadPrime(p))?;
        if det_mod(&red, n, p) != 1 {
            return Err(GenericityError::UnsupportedGroup(format!(
                "a generator does not reduce into SL{n}(F_{p})"
            )));
        }
        gens.push(red);
    }
    let id: Vec<u64> = (0..n * n).map(|k| u64::from(k % (n + 1) == 0)).collect();
    let mut seen = HashSet::new();
    seen.insert(encode(&id, p));
    let mut frontier = vec![id];
    while !frontier.is_empty() && (seen.len() as u64) < order {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &gens {
                let h = mul(m, g, n, p);
                if seen.insert(encode(&h, p)) {
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    let closure_order = seen.len() as u64;
    Ok(GenerationReport {
        prime: p,
        dim: n,
        closure_order,
        group_order: order,
        generates: closure_order == order,
    })
}
