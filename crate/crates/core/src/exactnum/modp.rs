//! Polynomials over prime fields and their complete factorization
//! (square-free, distinct-degree and Cantor-Zassenhaus equal-degree
//! splitting).

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::PolyQ;
use super::rational::{invmod, mulmod, rational_mod_p};
use super::ExactError;

/// Polynomial over `F_p`, ascending coefficients in `0..p`, trimmed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyFp {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyFp {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        let pi = p as i64;
        Self::new(p, coeffs.iter().map(|&c| c.rem_euclid(pi) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (mulmod(acc, x, self.p) + c) % self.p;
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|k| {
                (self.coeffs.get(k).copied().unwrap_or(0) + o.coeffs.get(k).copied().unwrap_or(0))
                    % self.p
            })
            .collect();
        Self::new(self.p, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.p,
            self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect(),
        )
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::new(
            self.p,
            self.coeffs.iter().map(|&a| mulmod(a, c, self.p)).collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        Self::new(self.p, acc.into_iter().map(|v| v as u64).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invmod(self.lead(), self.p))
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.deg() < d.deg() || self.is_zero() {
            return (Self::zero(p), self.clone());
        }
        let dd = d.deg();
        let inv = invmod(d.lead(), p);
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = mulmod(r[k + dd], inv, p);
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[k + j] = (r[k + j] + p - mulmod(c, dc, p)) % p;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn gcd(a: &Self, b: &Self) -> Self {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Monic gcd `g` with cofactors `s, t` such that `s*a + t*b = g`.
    pub fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let p = a.p;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = invmod(r0.lead(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| mulmod(c, k as u64 % self.p, self.p))
                .collect(),
        )
    }

    pub fn mulmod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(&acc, m);
            if e.bit(i) {
                acc = acc.mulmod(&base, m);
            }
        }
        acc
    }

    /// Reciprocal `t^deg f(1/t)` made monic; requires `f(0) != 0`.
    pub fn reciprocal(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(self.p, c).monic()
    }

    pub fn is_squarefree(&self) -> bool {
        if self.deg() == 0 {
            return true;
        }
        let d = self.derivative();
        !d.is_zero() && Self::gcd(self, &d).deg() == 0
    }

    /// Lift to a polynomial over Q with coefficients in `0..p`.
    pub fn to_polyq(&self) -> PolyQ {
        PolyQ::from_ints(&self.coeffs.iter().map(|&c| c as i64).collect::<Vec<_>>())
    }

    /// Reduce a rational polynomial modulo `p`; `None` if `p` divides a
    /// denominator.
    pub fn from_polyq(f: &PolyQ, p: u64) -> Option<Self> {
        let c = f
            .coeffs()
            .iter()
            .map(|q| rational_mod_p(q, p))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::new(p, c))
    }
}

impl fmt::Display for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            parts.push(match (c, k) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        write!(f, "{} (mod {})", parts.join(" + "), self.p)
    }
}

impl fmt::Debug for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Complete factorization of the reduction of a rational polynomial mod p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationModP {
    pub p: u64,
    /// Leading coefficient of the reduction.
    pub unit: u64,
    /// Monic irreducible factors with multiplicity, sorted by (degree,
    /// coefficients).
    pub factors: Vec<(PolyFp, usize)>,
}

impl FactorizationModP {
    /// Multiset of irreducible factor degrees (with multiplicity), sorted
    /// descending.
    pub fn degree_pattern(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat(f.deg() as u32).take(*m))
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, m)| *m == 1)
    }

    /// Product of the factors (times the unit).
    pub fn expand(&self) -> PolyFp {
        let mut acc = PolyFp::new(self.p, vec![self.unit]);
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(f);
            }
        }
        acc
    }
}

/// Factor `f` modulo `p`.
pub fn factor_mod_p(f: &PolyQ, p: u64) -> Result<FactorizationModP, ExactError> {
    if p < 2 || !super::rational::is_prime(p) {
        return Err(ExactError::BadPrime(p));
    }
    let red = PolyFp::from_polyq(f, p).ok_or(ExactError::BadPrime(p))?;
    if red.deg() != f.deg() || red.is_zero() {
        return Err(ExactError::BadPrime(p));
    }
    let unit = red.lead();
    let monic = red.monic();
    let mut factors = Vec::new();
    for (sq, mult) in squarefree_factorization(&monic) {
        for g in factor_squarefree(&sq) {
            factors.push((g, mult));
        }
    }
    factors.sort_by(|(a, ma), (b, mb)| {
        a.deg()
            .cmp(&b.deg())
            .then_with(|| a.coeffs.cmp(&b.coeffs))
            .then(ma.cmp(mb))
    });
    Ok(FactorizationModP { p, unit, factors })
}

/// Square-free decomposition of a monic polynomial over `F_p`.
pub fn squarefree_factorization(f: &PolyFp) -> Vec<(PolyFp, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let d = f.derivative();
    let mut c = PolyFp::gcd(f, &d);
    let mut w = f.exact_div(&c).monic();
    let mut i = 1;
    while w.deg() > 0 {
        let y = PolyFp::gcd(&w, &c);
        let z = w.exact_div(&y).monic();
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w).monic();
    }
    if c.deg() > 0 {
        // c is a p-th power
        let root = PolyFp::new(
            p,
            c.coeffs.iter().step_by(p as usize).copied().collect(),
        );
        for (g, m) in squarefree_factorization(&root.monic()) {
            out.push((g, m * p as usize));
        }
    }
    out
}

/// Distinct-degree factorization of a monic square-free polynomial:
/// pairs `(product of all irreducible factors of degree d, d)`.
pub fn distinct_degree(f: &PolyFp) -> Vec<(PolyFp, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = PolyFp::x(p);
    let mut h = x.rem(&rest);
    let pe = BigUint::from(p);
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.powmod(&pe, &rest);
        let g = PolyFp::gcd(&h.sub(&x), &rest);
        if g.deg() > 0 {
            rest = rest.exact_div(&g).monic();
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let dr = rest.deg();
        out.push((rest, dr));
    }
    out
}

/// Split a monic product of distinct irreducibles of common degree `d`.
pub fn equal_degree(f: &PolyFp, d: usize) -> Vec<PolyFp> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (f.p << 8) ^ d as u64);
    let mut out = Vec::new();
    equal_degree_rec(f, d, &mut rng, &mut out);
    out
}

fn equal_degree_rec(f: &PolyFp, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<PolyFp>) {
    let n = f.deg();
    if n == d {
        out.push(f.clone());
        return;
    }
    let p = f.p;
    let exp = if p == 2 {
        BigUint::zero()
    } else {
        (BigUint::from(p).pow(d as u32) - BigUint::one()) / 2u32
    };
    loop {
        let a = PolyFp::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(kd-1)) restricted to degree d
            let mut acc = a.clone();
            let mut cur = a.clone();
            for _ in 1..d {
                cur = cur.mulmod(&cur, f);
                acc = acc.add(&cur);
            }
            acc
        } else {
            a.powmod(&exp, f).sub(&PolyFp::one(p))
        };
        let g = PolyFp::gcd(&b, f);
        if g.deg() > 0 && g.deg() < n {
            let h = f.exact_div(&g).monic();
            equal_degree_rec(&g, d, rng, out);
            equal_degree_rec(&h, d, rng, out);
            return;
        }
    }
}

/// Irreducible factors of a monic square-free polynomial.
pub fn factor_squarefree(f: &PolyFp) -> Vec<PolyFp> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f) {
        out.extend(equal_degree(&g, d));
    }
    out
}

/// Number of irreducible factors of a monic square-free polynomial
/// (cheap: distinct-degree only).
pub fn count_factors(f: &PolyFp) -> usize {
    distinct_degree(f).iter().map(|(g, d)| g.deg() / d).sum()
}

pub fn is_irreducible(f: &PolyFp) -> bool {
    f.deg() > 0 && f.is_squarefree() && count_factors(&f.monic()) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(f: &PolyFp) -> bool {
        // trial division by every monic polynomial of degree <= deg/2
        let p = f.modulus();
        let n = f.deg();
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut c = Vec::with_capacity(d + 1);
                let mut v = idx;
                for _ in 0..d {
                    c.push(v % p);
                    v /= p;
                }
                c.push(1);
                let g = PolyFp::new(p, c);
                if f.rem(&g).is_zero() {
                    return false;
                }
            }
        }
        n > 0
    }

    #[test]
    fn cubic_mod_small_primes() {
        let f = PolyQ::from_ints(&[-1, -1, 0, 1]); // t^3 - t - 1
        let f2 = factor_mod_p(&f, 2).unwrap();
        assert_eq!(f2.degree_pattern(), vec![3]);
        let f5 = factor_mod_p(&f, 5).unwrap();
        assert_eq!(f5.degree_pattern(), vec![2, 1]);
        assert_eq!(f5.factors[0].0, PolyFp::from_i64(5, &[-2, 1]));
        assert_eq!(f5.factors[1].0, PolyFp::from_i64(5, &[3, 2, 1]));
        let g = PolyQ::from_ints(&[-1, 0, 1]);
        let g7 = factor_mod_p(&g, 7).unwrap();
        assert_eq!(g7.factors.len(), 2);
        assert_eq!(g7.expand(), PolyFp::from_i64(7, &[-1, 0, 1]));
    }

    #[test]
    fn bad_primes_rejected() {
        let f = PolyQ::new(vec![
            super::super::rational::ratio(1, 3),
            super::super::rational::rat(1),
        ]);
        assert!(matches!(factor_mod_p(&f, 3), Err(ExactError::BadPrime(3))));
        let g = PolyQ::from_ints(&[1, 0, 5]);
        assert!(matches!(factor_mod_p(&g, 5), Err(ExactError::BadPrime(5))));
        assert!(matches!(factor_mod_p(&g, 4), Err(ExactError::BadPrime(4))));
    }

    #[test]
    fn repeated_and_pth_power_factors() {
        // (t+1)^2 (t^2+1)^3 over F_3; (t^3 + 2) = (t+2)^3 over F_3
        let a = PolyFp::from_i64(3, &[1, 1]);
        let b = PolyFp::from_i64(3, &[1, 0, 1]);
        let f = a.mul(&a).mul(&b).mul(&b).mul(&b);
        let fac = factor_mod_p(&f.to_polyq(), 3).unwrap();
        assert_eq!(fac.factors, vec![(a.clone(), 2), (b.clone(), 3)]);
        let g = PolyFp::from_i64(3, &[2, 0, 0, 1]);
        let fac = factor_mod_p(&g.to_polyq(), 3).unwrap();
        assert_eq!(fac.factors, vec![(PolyFp::from_i64(3, &[2, 1]), 3)]);
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &p in &[2u64, 3, 5, 7] {
            for _ in 0..60 {
                let n = rng.gen_range(1..=5);
                let mut c: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
                c.push(1);
                let f = PolyFp::new(p, c);
                if !f.is_squarefree() {
                    continue;
                }
                assert_eq!(is_irreducible(&f), brute_irreducible(&f), "{f}");
            }
        }
    }
}
