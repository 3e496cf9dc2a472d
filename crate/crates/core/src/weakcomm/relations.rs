//! Lattices of multiplicative relations among algebraic numbers.
//!
//! Candidates come from LLL on `(exponents | 2 pi multiple | 2^P log|x|,
//! 2^P arg x)`; each candidate is proved exactly, and completeness up to
//! the exponent bound is certified from the Gram-Schmidt norms of the
//! reduced basis. Purely rational inputs use unique factorization instead.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::lattice::{canonical_basis, gram_schmidt_norms, hnf, hnf_contains, left_kernel, lll, IntRow};
use super::WeakCommError;
use crate::exactnum::interval::ComplexBall;
use crate::exactnum::{AlgebraicNumber, ExactError, PolyQ};

/// Precision schedule for the numeric candidate search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationConfig {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for RelationConfig {
    fn default() -> Self {
        Self {
            start_bits: 128,
            max_bits: 4096,
        }
    }
}

/// Integer basis of the relations `prod x_i^{a_i} = 1`.
#[derive(Debug, Clone)]
pub struct RelationLattice {
    /// Canonical basis (see [`canonical_basis`]).
    pub basis: Vec<IntRow>,
    pub bound: i64,
    pub numbers: Vec<AlgebraicNumber>,
    /// True when the lattice is complete with no exponent bound (all inputs
    /// rational).
    pub unconditional: bool,
    /// Precision at which completeness was certified (0 for exact paths).
    pub precision_bits: u32,
}

impl RelationLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        hnf_contains(&hnf(&self.basis), v)
    }
}

/// Relation lattice of `nums`, complete for relations with all
/// `|a_i| <= bound`.
pub fn relation_lattice(
    nums: &[AlgebraicNumber],
    bound: i64,
    cfg: &RelationConfig,
) -> Result<RelationLattice, WeakCommError> {
    let (basis, unconditional, precision_bits) = raw_lattice(nums, bound, cfg)?;
    Ok(RelationLattice {
        basis: canonical_basis(&basis),
        bound,
        numbers: nums.to_vec(),
        unconditional,
        precision_bits,
    })
}

/// Hermite basis of the relation lattice plus (unconditional, bits).
pub(crate) fn raw_lattice(
    nums: &[AlgebraicNumber],
    bound: i64,
    cfg: &RelationConfig,
) -> Result<(Vec<IntRow>, bool, u32), WeakCommError> {
    let k = nums.len();
    if nums.iter().any(|x| x.is_zero()) {
        return Err(ExactError::ZeroBase.into());
    }
    if k == 0 {
        return Ok((Vec::new(), true, 0));
    }
    // merge exact duplicates
    let mut reps: Vec<AlgebraicNumber> = Vec::new();
    let mut class = Vec::with_capacity(k);
    for x in nums {
        match reps.iter().position(|r| r == x) {
            Some(i) => class.push(i),
            None => {
                class.push(reps.len());
                reps.push(x.clone());
            }
        }
    }
    let (rep_basis, unconditional, bits) = if reps.iter().all(|x| x.is_rational()) {
        let qs: Vec<BigRational> = reps.iter().map(|x| x.as_rational().unwrap()).collect();
        (rational_relations(&qs), true, 0)
    } else {
        let (b, bits) = numeric_relations(&reps, bound, cfg)?;
        (b, false, bits)
    };
    // lift from representatives to the original positions
    let mut first = vec![usize::MAX; reps.len()];
    for (i, &c) in class.iter().enumerate() {
        if first[c] == usize::MAX {
            first[c] = i;
        }
    }
    let mut gens: Vec<IntRow> = Vec::new();
    for w in &rep_basis {
        let mut v = vec![BigInt::zero(); k];
        for (r, x) in w.iter().enumerate() {
            v[first[r]] = x.clone();
        }
        gens.push(v);
    }
    for (i, &c) in class.iter().enumerate() {
        if first[c] != i {
            let mut v = vec![BigInt::zero(); k];
            v[i] = BigInt::one();
            v[first[c]] = -BigInt::one();
            gens.push(v);
        }
    }
    Ok((hnf(&gens), unconditional, bits))
}

/// Pairwise coprime integers `> 1` whose products cover every input.
fn coprime_base(inputs: &[BigInt]) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = inputs.iter().filter(|x| **x > BigInt::one()).cloned().collect();
    base.sort();
    base.dedup();
    loop {
        let mut split = None;
        'outer: for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if !g.is_one() {
                    split = Some((i, j, g));
                    break 'outer;
                }
            }
        }
        let Some((i, j, g)) = split else { break };
        let a = &base[i] / &g;
        let b = &base[j] / &g;
        base.remove(j);
        base.remove(i);
        for x in [a, b, g] {
            if x > BigInt::one() {
                base.push(x);
            }
        }
        base.sort();
        base.dedup();
    }
    base
}

fn base_exponents(n: &BigInt, base: &[BigInt]) -> Vec<BigInt> {
    let mut m = n.abs();
    base.iter()
        .map(|b| {
            let mut e = 0i64;
            while (&m % b).is_zero() {
                m /= b;
                e += 1;
            }
            BigInt::from(e)
        })
        .collect()
}

/// Exact relation lattice of nonzero rationals via a coprime base and sign
/// parity.
fn rational_relations(qs: &[BigRational]) -> Vec<IntRow> {
    let mut ints: Vec<BigInt> = Vec::new();
    for q in qs {
        ints.push(q.numer().abs());
        ints.push(q.denom().clone());
    }
    let base = coprime_base(&ints);
    let nb = base.len();
    // rows: exponent vector, sign bit; final row enforces parity
    let mut rows: Vec<IntRow> = qs
        .iter()
        .map(|q| {
            let en = base_exponents(q.numer(), &base);
            let ed = base_exponents(q.denom(), &base);
            let mut r: IntRow = en.into_iter().zip(ed).map(|(a, b)| a - b).collect();
            r.push(if q.is_negative() { BigInt::one() } else { BigInt::zero() });
            r
        })
        .collect();
    let mut parity = vec![BigInt::zero(); nb];
    parity.push(BigInt::from(2));
    rows.push(parity);
    let ker = left_kernel(&rows);
    let proj: Vec<IntRow> = ker.into_iter().map(|mut v| {
        v.pop();
        v
    }).collect();
    hnf(&proj)
}

const RESIDUAL_SLACK: i64 = 8;

fn numeric_relations(
    xs: &[AlgebraicNumber],
    bound: i64,
    cfg: &RelationConfig,
) -> Result<(Vec<IntRow>, u32), WeakCommError> {
    let k = xs.len();
    let mut bits = cfg.start_bits.max(32);
    loop {
        if let Some(found) = numeric_attempt(xs, bound, bits)? {
            return Ok((found, bits));
        }
        if bits >= cfg.max_bits {
            return Err(WeakCommError::PrecisionExhausted { bits: cfg.max_bits, count: k });
        }
        bits = (bits * 2).min(cfg.max_bits);
    }
}

/// One precision level. Returns the verified relations when their span is
/// certified to contain every relation within the bound.
/// Rows with larger exponents are never tested exactly. They only matter
/// for completeness, which the Gram-Schmidt certificate handles.
const CANDIDATE_CAP: i64 = 1 << 24;

fn numeric_attempt(xs: &[AlgebraicNumber], bound: i64, bits: u32) -> Result<Option<Vec<IntRow>>, WeakCommError> {
    let k = xs.len();
    let two_pi = crate::exactnum::fixed::pi_fixed(bits) * 2;
    let mut rows: Vec<IntRow> = Vec::with_capacity(k + 1);
    for (i, x) in xs.iter().enumerate() {
        let mut r = vec![BigInt::zero(); k + 3];
        r[i] = BigInt::one();
        r[k + 1] = x.log_abs_fixed(bits)?;
        r[k + 2] = x.arg_fixed(bits)?;
        rows.push(r);
    }
    let mut last = vec![BigInt::zero(); k + 3];
    last[k] = BigInt::one();
    last[k + 2] = two_pi;
    rows.push(last);
    let (reduced, _) = lll(&rows);

    let mut verified = Vec::new();
    let mut others = Vec::new();
    for row in reduced {
        let a = &row[..k];
        let l1: BigInt = a.iter().map(|x| x.abs()).sum();
        let slack = BigInt::from(RESIDUAL_SLACK);
        let small = a.iter().all(|x| x.abs() <= BigInt::from(CANDIDATE_CAP))
            && row[k + 1].abs() <= &slack * (&l1 + 1)
            && row[k + 2].abs() <= &slack * (&l1 + row[k].abs() + 1);
        if small && !a.iter().all(|x| x.is_zero()) && is_relation(xs, a)? {
            verified.push(row);
        } else {
            others.push(row);
        }
    }
    let r = verified.len();
    let mut ordered = verified.clone();
    ordered.extend(others);
    let gs = gram_schmidt_norms(&ordered);
    // squared norm bound for any relation with |a_i| <= bound
    let kb = BigInt::from(k as i64 * bound);
    let m_max = &kb / 2 + 1;
    let rl = BigInt::from(RESIDUAL_SLACK) * (&kb + 1);
    let rt = BigInt::from(RESIDUAL_SLACK) * (&kb + &m_max + 1);
    let v2 = BigInt::from(k as i64 * bound * bound) + &m_max * &m_max + &rl * &rl + &rt * &rt;
    let v2 = BigRational::from_integer(v2);
    let certified = gs[r..].iter().all(|g| *g > v2);
    if !certified {
        return Ok(None);
    }
    Ok(Some(verified.into_iter().map(|row| row[..k].to_vec()).collect()))
}

fn falling(d: u64, s: u64) -> f64 {
    (0..s).map(|i| (d - i) as f64).product()
}

fn height_bits(f: &PolyQ) -> f64 {
    let c = f.to_primitive_integer();
    let s: BigInt = c.iter().map(|x| x * x).sum();
    (s.bits() as f64 / 2.0).ceil()
}

/// Exact test of `prod xs_i^{a_i} = 1`.
///
/// Rational products are compared directly. Otherwise the product is
/// enclosed in a ball; `|y - 1| < 2^-T` proves `y = 1`, where `T` exceeds
/// `D (h(y) + 1)` in bits for `D` a bound on the degree of the field
/// generated by the factors (a nonzero algebraic number `z` of degree `D`
/// has `log|z| >= -D h(z)`).
pub fn is_relation(xs: &[AlgebraicNumber], a: &[BigInt]) -> Result<bool, WeakCommError> {
    let used: Vec<(usize, i64)> = a
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .map(|(i, e)| e.to_i64().map(|v| (i, v)))
        .collect::<Option<_>>()
        .ok_or_else(|| WeakCommError::InvalidElement("exponent out of range".into()))?;
    if used.is_empty() {
        return Ok(true);
    }
    if used.iter().all(|(i, _)| xs[*i].is_rational()) {
        let mut acc = BigRational::one();
        for (i, e) in &used {
            let q = xs[*i].as_rational().unwrap();
            acc *= if *e >= 0 { q.pow(*e as i32) } else { q.recip().pow((-e) as i32) };
        }
        return Ok(acc.is_one());
    }
    // degree bound of the generated field
    let mut by_poly: BTreeMap<Vec<BigInt>, (u64, Vec<usize>)> = BTreeMap::new();
    let mut h = 1.0f64;
    let mut mag = 64.0f64;
    for (i, e) in &used {
        let x = &xs[*i];
        let d = x.degree() as u64;
        let entry = by_poly
            .entry(x.minpoly().to_primitive_integer())
            .or_insert((d, Vec::new()));
        if !entry.1.iter().any(|&j| xs[j] == *x) {
            entry.1.push(*i);
        }
        h += e.unsigned_abs() as f64 * height_bits(x.minpoly()) / d as f64;
        let (re, im) = x.to_f64();
        mag += e.unsigned_abs() as f64 * ((re * re + im * im).sqrt().log2().abs() + 2.0);
    }
    let deg: f64 = by_poly
        .values()
        .map(|(d, v)| falling(*d, v.len() as u64))
        .product();
    let t = (deg * h).ceil() + 2.0;
    if t > 4.0e6 {
        // far beyond desk scale; fall back to exact arithmetic
        let terms: Vec<(&AlgebraicNumber, i64)> = used.iter().map(|(i, e)| (&xs[*i], *e)).collect();
        return Ok(AlgebraicNumber::product(&terms)?.equals_one());
    }
    let t = t as u32;
    let mut p = 64u32;
    loop {
        let w = p + mag as u32;
        let mut acc = ComplexBall::one(w);
        for (i, e) in &used {
            let b = xs[*i].ball(w)?;
            let pb = b
                .pow(*e)
                .ok_or_else(|| WeakCommError::Exact(ExactError::IsolationFailed("ball meets zero".into())))?;
            acc = acc.mul(&pb);
        }
        let z = acc.sub(&ComplexBall::one(w));
        if z.excludes_zero() {
            return Ok(false);
        }
        if p > t && z.is_below(t) {
            return Ok(true);
        }
        if p > 4 * t + 256 {
            return Err(WeakCommError::Exact(ExactError::IsolationFailed(
                "relation test did not converge".into(),
            )));
        }
        p = (p * 2).max(t + 16).min(4 * t + 512);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    fn nums(v: &[i64]) -> Vec<AlgebraicNumber> {
        v.iter().map(|&x| AlgebraicNumber::from_int(x)).collect()
    }

    fn rows(v: &[&[i64]]) -> Vec<IntRow> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn quad(c0: i64, c1: i64) -> Vec<AlgebraicNumber> {
        let mut r = AlgebraicNumber::roots_of_irreducible(&PolyQ::from_ints(&[c0, c1, 1])).unwrap();
        r.sort_by(|a, b| b.to_f64().0.partial_cmp(&a.to_f64().0).unwrap());
        r
    }

    #[test]
    fn rational_lattices() {
        let cfg = RelationConfig::default();
        assert_eq!(relation_lattice(&nums(&[2, 3]), 20, &cfg).unwrap().rank(), 0);
        let l = relation_lattice(&nums(&[2, 4, 8]), 20, &cfg).unwrap();
        assert_eq!(l.basis, rows(&[&[2, -1, 0], &[3, 0, -1]]));
        let l = relation_lattice(&nums(&[-1, 1, -2, 6]), 20, &cfg).unwrap();
        assert!(l.contains(&rows(&[&[2, 0, 0, 0]])[0]));
        assert!(l.contains(&rows(&[&[0, 1, 0, 0]])[0]));
        assert!(!l.contains(&rows(&[&[1, 0, 0, 0]])[0]));
        let q = vec![
            AlgebraicNumber::from_rational(crate::exactnum::rational::ratio(2, 3)),
            AlgebraicNumber::from_rational(crate::exactnum::rational::ratio(9, 4)),
        ];
        assert_eq!(relation_lattice(&q, 5, &cfg).unwrap().basis, rows(&[&[2, 1]]));
        let _ = rat(0);
    }

    #[test]
    fn quadratic_unit_relations() {
        let cfg = RelationConfig::default();
        let t = quad(1, -3)[0].clone();
        let t2 = t.pow(2).unwrap();
        let l = relation_lattice(&[t.clone(), t2], 20, &cfg).unwrap();
        assert_eq!(l.basis, rows(&[&[2, -1]]));
        let s = quad(1, -4)[0].clone();
        let l = relation_lattice(&[t.clone(), s], 20, &cfg).unwrap();
        assert_eq!(l.rank(), 0);
        // conjugate pair multiplies to 1
        let both = quad(1, -3);
        let l = relation_lattice(&both, 20, &cfg).unwrap();
        assert_eq!(l.basis, rows(&[&[1, 1]]));
    }

    #[test]
    fn torsion_relations() {
        let cfg = RelationConfig::default();
        let i = AlgebraicNumber::roots_of_irreducible(&PolyQ::from_ints(&[1, 0, 1])).unwrap();
        let l = relation_lattice(&i[..1], 20, &cfg).unwrap();
        assert_eq!(l.basis, rows(&[&[4]]));
        let t = quad(1, -3)[0].clone();
        let minus_t = t.mul(&AlgebraicNumber::from_int(-1)).unwrap();
        let l = relation_lattice(&[t, minus_t, AlgebraicNumber::from_int(-1)], 20, &cfg).unwrap();
        assert!(l.contains(&rows(&[&[1, -1, 1]])[0]));
        assert!(l.contains(&rows(&[&[0, 0, 2]])[0]));
    }

    #[test]
    fn exact_relation_test() {
        let both = quad(1, -3);
        assert!(is_relation(&both, &rows(&[&[3, 3]])[0]).unwrap());
        assert!(!is_relation(&both, &rows(&[&[3, 2]])[0]).unwrap());
    }
}
