//! Factorization over Q: square-free decomposition followed by
//! Hensel lifting of a modular factorization and recombination of the
//! lifted factors (Zassenhaus).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::modp::{factor_squarefree, PolyFp};
use super::poly::PolyQ;
use super::rational::{isqrt_ceil, primes_up_to};
use super::ExactError;

/// Largest degree accepted by [`factor_over_q`].
pub const DEGREE_CAP: usize = 64;
/// Largest number of modular factors the recombination step will search.
const MODULAR_FACTOR_CAP: usize = 20;

/// `f = content * prod g_i^{m_i}` with monic irreducible `g_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationQ {
    pub content: BigRational,
    pub factors: Vec<(PolyQ, usize)>,
}

impl FactorizationQ {
    pub fn expand(&self) -> PolyQ {
        let mut acc = PolyQ::constant(self.content.clone());
        for (g, m) in &self.factors {
            acc = &acc * &g.pow(*m as u32);
        }
        acc
    }

    /// Distinct irreducible factors.
    pub fn irreducibles(&self) -> impl Iterator<Item = &PolyQ> {
        self.factors.iter().map(|(g, _)| g)
    }
}

/// Square-free decomposition (Yun) of a nonzero polynomial: monic
/// `a_i` with `f = lc * prod a_i^i`.
pub fn squarefree_decomposition(f: &PolyQ) -> Vec<(PolyQ, usize)> {
    let f = f.monic();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative();
    let a0 = PolyQ::gcd(&f, &df);
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let c = df.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.deg() > 0 {
        let a = PolyQ::gcd(&b, &d);
        let nb = b.exact_div(&a).expect("gcd divides");
        let nc = d.exact_div(&a).expect("gcd divides");
        d = &nc - &nb.derivative();
        b = nb;
        if a.deg() > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Complete factorization over Q into monic irreducibles.
pub fn factor_over_q(f: &PolyQ) -> Result<FactorizationQ, ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    if f.deg() > DEGREE_CAP {
        return Err(ExactError::DegreeTooLarge {
            degree: f.deg(),
            cap: DEGREE_CAP,
        });
    }
    let content = f.lead();
    let mut factors = Vec::new();
    for (sq, m) in squarefree_decomposition(f) {
        for g in factor_squarefree_q(&sq)? {
            factors.push((g, m));
        }
    }
    factors.sort_by(|(a, ma), (b, mb)| {
        a.deg()
            .cmp(&b.deg())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
            .then(ma.cmp(mb))
    });
    Ok(FactorizationQ { content, factors })
}

pub fn is_irreducible(f: &PolyQ) -> Result<bool, ExactError> {
    if f.deg() == 0 {
        return Ok(false);
    }
    let fac = factor_over_q(f)?;
    Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
}

/// Monic irreducible factors of a monic square-free polynomial.
fn factor_squarefree_q(f: &PolyQ) -> Result<Vec<PolyQ>, ExactError> {
    let n = f.deg();
    if n <= 1 {
        return Ok(vec![f.monic()]);
    }
    // pull out the factor t, which would spoil the constant-term filter
    if f.coeff(0).is_zero() {
        let rest = f.exact_div(&PolyQ::x()).expect("t divides");
        let mut out = vec![PolyQ::x()];
        out.extend(factor_squarefree_q(&rest)?);
        return Ok(out);
    }
    let prim = f.to_primitive_integer();
    let lc = prim[n].clone();
    // monic transform g(x) = lc^{n-1} f(x / lc)
    let mut g = Vec::with_capacity(n + 1);
    let mut pw = BigInt::one();
    let mut pows = vec![BigInt::one(); n];
    for k in (0..n).rev() {
        pows[k] = pw.clone();
        pw *= &lc;
    }
    for k in 0..n {
        g.push(&prim[k] * &pows[k]);
    }
    g.push(BigInt::one());
    let monic_factors = zassenhaus(&g)?;
    let mut out: Vec<PolyQ> = monic_factors
        .into_iter()
        .map(|h| {
            // h(lc * x), made monic over Q
            let mut c = Vec::with_capacity(h.len());
            let mut pw = BigInt::one();
            for coeff in &h {
                c.push(coeff * &pw);
                pw *= &lc;
            }
            PolyQ::from_bigints(&c).monic()
        })
        .collect();
    out.sort_by(|a, b| a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs())));
    Ok(out)
}

type ZPoly = Vec<BigInt>;

fn zp_trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn zp_mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zp_trim(out)
}

fn zp_mod(a: &[BigInt], m: &BigInt) -> ZPoly {
    zp_trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn zp_symmetric(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m >> 1;
    zp_trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Exact division by a monic integer polynomial; `None` if not exact.
fn zp_div_monic(a: &[BigInt], d: &[BigInt]) -> Option<ZPoly> {
    let dd = d.len() - 1;
    if a.len() < d.len() {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dc) in d.iter().enumerate() {
            r[k + j] -= &c * dc;
        }
        q[k] = c;
    }
    r.iter().all(|c| c.is_zero()).then(|| zp_trim(q))
}

fn to_fp(a: &[BigInt], p: u64) -> PolyFp {
    let pb = BigInt::from(p);
    PolyFp::new(
        p,
        a.iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("reduced mod p"))
            .collect(),
    )
}

fn from_fp(a: &PolyFp) -> ZPoly {
    a.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

/// Factor a monic square-free integer polynomial of degree >= 2.
fn zassenhaus(g: &[BigInt]) -> Result<Vec<ZPoly>, ExactError> {
    let n = g.len() - 1;
    // pick the good prime with the fewest modular factors among a few
    let mut best: Option<(u64, Vec<PolyFp>)> = None;
    let mut good = 0;
    for p in primes_up_to(2000).into_iter().skip(1) {
        let gp = to_fp(g, p);
        if !gp.is_squarefree() {
            continue;
        }
        let facs = factor_squarefree(&gp);
        if facs.len() == 1 {
            return Ok(vec![g.to_vec()]);
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        good += 1;
        if good >= 6 {
            break;
        }
    }
    let (p, mod_factors) = best.ok_or_else(|| {
        ExactError::IsolationFailed("no prime of good reduction below 2000".into())
    })?;
    if mod_factors.len() > MODULAR_FACTOR_CAP {
        return Err(ExactError::DegreeTooLarge {
            degree: n,
            cap: DEGREE_CAP,
        });
    }
    // coefficient bound for monic factors: 2^n * ||g||_2
    let norm2: BigInt = g.iter().map(|c| c * c).sum();
    let bound = (isqrt_ceil(&norm2) << n) + 1;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= &bound * 2 {
        pk *= &pb;
        k += 1;
    }
    let lifted = hensel_lift(g, &mod_factors, p, k);
    Ok(recombine(g.to_vec(), lifted, &pk))
}

fn hensel_lift(f: &[BigInt], factors: &[PolyFp], p: u64, k: u32) -> Vec<ZPoly> {
    let pk = BigInt::from(p).pow(k);
    if factors.len() == 1 {
        return vec![zp_mod(f, &pk)];
    }
    let half = factors.len() / 2;
    let prod = |fs: &[PolyFp]| fs.iter().fold(PolyFp::one(p), |acc, x| acc.mul(x));
    let g = prod(&factors[..half]);
    let h = prod(&factors[half..]);
    let (gl, hl) = lift_two(f, &g, &h, p, k);
    let mut out = hensel_lift(&gl, &factors[..half], p, k);
    out.extend(hensel_lift(&hl, &factors[half..], p, k));
    out
}

/// Lift `f = g h (mod p)` with monic coprime `g, h` to a factorization
/// modulo `p^k`.
fn lift_two(f: &[BigInt], g: &PolyFp, h: &PolyFp, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (one, s, t) = PolyFp::ext_gcd(g, h);
    debug_assert!(one.is_one(), "modular factors must be coprime");
    let pb = BigInt::from(p);
    let mut gz = from_fp(g);
    let mut hz = from_fp(h);
    let mut pj = pb.clone();
    for _ in 1..k {
        let prod = zp_mul(&gz, &hz);
        let len = f.len().max(prod.len());
        let diff: ZPoly = (0..len)
            .map(|i| {
                let a = f.get(i).cloned().unwrap_or_default();
                let b = prod.get(i).cloned().unwrap_or_default();
                a - b
            })
            .collect();
        let e: ZPoly = diff
            .iter()
            .map(|c| {
                debug_assert!((c % &pj).is_zero());
                c / &pj
            })
            .collect();
        let e = to_fp(&e, p);
        let dg = t.mul(&e).rem(g);
        let dh = s.mul(&e).rem(h);
        for (i, c) in dg.coeffs().iter().enumerate() {
            gz[i] += &pj * BigInt::from(*c);
        }
        for (i, c) in dh.coeffs().iter().enumerate() {
            hz[i] += &pj * BigInt::from(*c);
        }
        pj *= &pb;
    }
    (zp_mod(&gz, &pj), zp_mod(&hz, &pj))
}

fn recombine(mut g: ZPoly, mut lifted: Vec<ZPoly>, pk: &BigInt) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= lifted.len() {
        let r = lifted.len();
        let mut idx: Vec<usize> = (0..s).collect();
        loop {
            let c0 = idx
                .iter()
                .fold(BigInt::one(), |acc, &i| (acc * &lifted[i][0]).mod_floor(pk));
            let c0 = zp_symmetric(&[c0], pk).first().cloned().unwrap_or_default();
            let passes = !c0.is_zero() && (&g[0] % &c0).is_zero();
            if passes {
                let cand = idx
                    .iter()
                    .fold(vec![BigInt::one()], |acc, &i| zp_mod(&zp_mul(&acc, &lifted[i]), pk));
                let cand = zp_symmetric(&cand, pk);
                if let Some(q) = zp_div_monic(&g, &cand) {
                    out.push(cand);
                    g = q;
                    let mut rest = Vec::with_capacity(r - s);
                    for (i, f) in lifted.into_iter().enumerate() {
                        if !idx.contains(&i) {
                            rest.push(f);
                        }
                    }
                    lifted = rest;
                    continue 'outer;
                }
            }
            // next combination in lexicographic order
            let mut i = s;
            loop {
                if i == 0 {
                    s += 1;
                    continue 'outer;
                }
                i -= 1;
                if idx[i] != i + r - s {
                    break;
                }
            }
            idx[i] += 1;
            for j in i + 1..s {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    if g.len() > 1 {
        out.push(g);
    }
    out
}

/// Rational roots of a nonzero polynomial (distinct).
pub fn rational_roots(f: &PolyQ) -> Result<Vec<BigRational>, ExactError> {
    let fac = factor_over_q(f)?;
    Ok(fac
        .factors
        .iter()
        .filter(|(g, _)| g.deg() == 1)
        .map(|(g, _)| -g.coeff(0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::ratio;

    fn p(c: &[i64]) -> PolyQ {
        PolyQ::from_ints(c)
    }

    #[test]
    fn splits_products_of_known_factors() {
        let a = p(&[-1, -1, 0, 1]);
        let b = p(&[1, -3, 1]);
        let c = p(&[2, 0, 0, 0, 1]);
        let f = &(&a * &b) * &c;
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.factors, vec![(b, 1), (a, 1), (c, 1)]);
        assert_eq!(fac.expand(), f);
    }

    #[test]
    fn swinnerton_dyer_style_is_irreducible() {
        // x^4 - 10x^2 + 1 splits modulo every prime into factors of degree <= 2
        let f = p(&[1, 0, -10, 0, 1]);
        assert!(is_irreducible(&f).unwrap());
        let g = &p(&[-2, 0, 1]) * &p(&[-3, 0, 1]);
        assert_eq!(factor_over_q(&g).unwrap().factors.len(), 2);
    }

    #[test]
    fn non_monic_and_repeated() {
        let f = &(&p(&[1, 2]) * &p(&[1, 2])) * &p(&[-5, 0, 3]);
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(fac.factors[0], (PolyQ::new(vec![ratio(1, 2), ratio(1, 1)]), 2));
        assert_eq!(fac.expand(), f);
        assert_eq!(rational_roots(&f).unwrap(), vec![ratio(-1, 2)]);
    }

    #[test]
    fn cyclotomic_products() {
        let f = PolyQ::from_ints(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]); // t^12 - 1
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.factors.len(), 6);
        for (g, _) in &fac.factors {
            assert!([1u64, 2, 3, 4, 6, 12].iter().any(|&k| PolyQ::cyclotomic(k) == *g));
        }
    }

    #[test]
    fn factor_with_zero_root() {
        let f = &p(&[0, 1]) * &p(&[-2, 0, 1]);
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.factors, vec![(p(&[0, 1]), 1), (p(&[-2, 0, 1]), 1)]);
    }
}
