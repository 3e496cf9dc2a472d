//! Geodesic length data: hyperbolic lengths of `SL_2` elements, the
//! quadratic length functional on split tori, length spectra of word balls
//! and rationality of length ratios.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactnum::rational::{prime_support, rat, ratio, valuation};
use crate::exactnum::{AlgebraicNumber, ExactError, MatrixQ, PolyQ, RationalInterval};
use crate::rootsys::{quadratic_sum, roots, Family, RootSysError, RootSystemType};
use crate::weakcomm::relations::is_relation;
use crate::weakcomm::WeakCommError;

/// Precision of the log intervals used to locate ratio candidates.
const RATIO_BITS: u32 = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectraError {
    #[error("element is not hyperbolic (|trace| <= 2)")]
    NotHyperbolic,
    #[error("expected a 2x2 matrix of determinant 1")]
    NotSl2,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("invalid torus element: {0}")]
    InvalidTorus(String),
    #[error("winding divisor must be positive")]
    BadWinding,
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    WeakComm(#[from] WeakCommError),
    #[error(transparent)]
    RootSys(#[from] RootSysError),
}

/// Length `(2 / n) log t` of the closed geodesic of a hyperbolic element,
/// where `t > 1` is the eigenvalue of `±g` and `n` the winding divisor.
#[derive(Debug, Clone)]
pub struct GeodesicLength {
    pub t: AlgebraicNumber,
    pub winding: u32,
    pub numeric: RationalInterval,
}

impl GeodesicLength {
    pub fn new(t: AlgebraicNumber, winding: u32, bits: u32) -> Result<Self, SpectraError> {
        if winding == 0 {
            return Err(SpectraError::BadWinding);
        }
        if !t.is_real() {
            return Err(SpectraError::NotHyperbolic);
        }
        let log = t.certified_log_abs(bits + 2)?;
        if !log.is_positive() || t.to_f64().0 < 0.0 {
            return Err(SpectraError::NotHyperbolic);
        }
        let numeric = log.scale(&ratio(2, winding as i64));
        Ok(Self { t, winding, numeric })
    }

    pub fn with_winding(&self, winding: u32, bits: u32) -> Result<Self, SpectraError> {
        Self::new(self.t.clone(), winding, bits)
    }
}

/// Geodesic length of a hyperbolic element of `SL_2(Q)`, enclosed in an
/// interval of width below `2^-bits`.
pub fn hyperbolic_length(g: &MatrixQ, bits: u32) -> Result<GeodesicLength, SpectraError> {
    if g.rows() != 2 || g.cols() != 2 || !g.det().is_one() {
        return Err(SpectraError::NotSl2);
    }
    let tr = g.trace().abs();
    if tr <= rat(2) {
        return Err(SpectraError::NotHyperbolic);
    }
    GeodesicLength::new(larger_root(&tr)?, 1, bits)
}

/// Larger root of `x^2 - tr x + 1` for `tr > 2`.
fn larger_root(tr: &BigRational) -> Result<AlgebraicNumber, SpectraError> {
    let f = PolyQ::new(vec![BigRational::one(), -tr.clone(), BigRational::one()]);
    let mut rs = AlgebraicNumber::roots_with_multiplicity(&f)?;
    rs.sort_by_key(|r| std::cmp::Reverse(r.sort_key()));
    Ok(rs.swap_remove(0))
}

/// Element of a split maximal torus given by its eigenvalues.
#[derive(Debug, Clone)]
pub struct SplitTorusElement {
    pub root_system: RootSystemType,
    /// Eigenvalues in the standard representation: `n + 1` values of
    /// product 1 for A_n; `n` inverse pairs for C_n and D_n, plus the
    /// eigenvalue 1 for B_n.
    pub eigenvalues: Vec<AlgebraicNumber>,
    /// One representative per coordinate of the ambient space.
    pub coordinates: Vec<AlgebraicNumber>,
}

impl SplitTorusElement {
    pub fn new(rt: RootSystemType, eigenvalues: Vec<AlgebraicNumber>) -> Result<Self, SpectraError> {
        if !rt.family().is_classical() {
            return Err(SpectraError::RootSys(RootSysError::UnsupportedFamily(rt.family())));
        }
        let n = rt.rank() as usize;
        let expected = match rt.family() {
            Family::A => n + 1,
            Family::B => 2 * n + 1,
            _ => 2 * n,
        };
        if eigenvalues.len() != expected {
            return Err(SpectraError::DimensionMismatch {
                expected,
                got: eigenvalues.len(),
            });
        }
        if eigenvalues.iter().any(|x| !x.is_real() || x.is_zero()) {
            return Err(SpectraError::InvalidTorus("eigenvalues of a split torus are real and nonzero".into()));
        }
        let coordinates = if rt.family() == Family::A {
            let terms: Vec<(&AlgebraicNumber, i64)> = eigenvalues.iter().map(|x| (x, 1)).collect();
            if !AlgebraicNumber::product(&terms)?.equals_one() {
                return Err(SpectraError::InvalidTorus("eigenvalue product must be 1".into()));
            }
            eigenvalues.clone()
        } else {
            inverse_pairs(&eigenvalues, rt.family() == Family::B)?
        };
        Ok(Self {
            root_system: rt,
            eigenvalues,
            coordinates,
        })
    }

    /// Interval coordinates `log|x_i|`.
    pub fn log_coords(&self, bits: u32) -> Result<Vec<RationalInterval>, SpectraError> {
        Ok(self
            .coordinates
            .iter()
            .map(|x| x.certified_log_abs(bits))
            .collect::<Result<_, _>>()?)
    }
}

/// Split a list closed under inversion into one representative per pair
/// (the one of absolute value at least 1). For B one eigenvalue 1 is set
/// aside first.
fn inverse_pairs(ev: &[AlgebraicNumber], drop_one: bool) -> Result<Vec<AlgebraicNumber>, SpectraError> {
    let mut rest: Vec<AlgebraicNumber> = ev.to_vec();
    if drop_one {
        let i = rest
            .iter()
            .position(|x| x.equals_one())
            .ok_or_else(|| SpectraError::InvalidTorus("B-type torus needs the eigenvalue 1".into()))?;
        rest.remove(i);
    }
    let mut out = Vec::new();
    while let Some(x) = rest.pop() {
        let xi = x.inv()?;
        let j = rest
            .iter()
            .position(|y| *y == xi)
            .ok_or_else(|| SpectraError::InvalidTorus("eigenvalues are not closed under inversion".into()))?;
        rest.remove(j);
        out.push(if x.to_f64().0.abs() >= 1.0 { x } else { xi });
    }
    out.reverse();
    Ok(out)
}

/// `lambda^2 = sum over roots of (log|alpha(g)|)^2`, as an interval, with
/// an exact form when every coordinate is rational.
#[derive(Debug, Clone)]
pub struct LambdaSquared {
    pub interval: RationalInterval,
    /// For rational coordinates: coefficients `c_{pq}` with
    /// `lambda^2 = sum c_{pq} log p log q` over primes `p <= q`.
    pub exact: Option<BTreeMap<(u64, u64), BigRational>>,
}

impl LambdaSquared {
    /// Closed form as text, e.g. `8*log(2)^2`.
    pub fn exact_string(&self) -> Option<String> {
        let e = self.exact.as_ref()?;
        if e.is_empty() {
            return Some("0".into());
        }
        let terms: Vec<String> = e
            .iter()
            .map(|((p, q), c)| {
                let c = crate::exactnum::rational::format_rational(c);
                if p == q {
                    format!("{c}*log({p})^2")
                } else {
                    format!("{c}*log({p})*log({q})")
                }
            })
            .collect();
        Some(terms.join(" + "))
    }
}

/// `lambda(g)^2` for a split torus element.
pub fn lambda_gamma(e: &SplitTorusElement, bits: u32) -> Result<LambdaSquared, SpectraError> {
    let rt = e.root_system;
    let logs = e.log_coords(bits + 16)?;
    let rs = roots(&rt)?;
    let mut acc = RationalInterval::point(BigRational::zero());
    for r in &rs {
        let mut s = RationalInterval::point(BigRational::zero());
        for (c, x) in r.coords.iter().zip(&logs) {
            if *c != 0 {
                s = s.add(&x.scale(&rat(*c)));
            }
        }
        acc = acc.add(&s.square());
    }
    let exact = e
        .coordinates
        .iter()
        .map(|x| x.as_rational())
        .collect::<Option<Vec<_>>>()
        .map(|qs| exact_lambda(&rt, &qs))
        .transpose()?;
    Ok(LambdaSquared {
        interval: acc.round_out(bits + 8),
        exact,
    })
}

/// Write `log|x_i| = sum_p v_p(x_i) log p` and expand the quadratic form.
fn exact_lambda(rt: &RootSystemType, qs: &[BigRational]) -> Result<BTreeMap<(u64, u64), BigRational>, SpectraError> {
    let mut primes: Vec<u64> = qs.iter().flat_map(prime_support).collect();
    primes.sort_unstable();
    primes.dedup();
    let vec_for = |p: u64| -> Vec<BigRational> {
        qs.iter()
            .map(|q| {
                let (a, _) = valuation(q.numer(), p);
                let (b, _) = valuation(q.denom(), p);
                rat(a as i64 - b as i64)
            })
            .collect()
    };
    let vs: Vec<Vec<BigRational>> = primes.iter().map(|&p| vec_for(p)).collect();
    let mut out = BTreeMap::new();
    for i in 0..primes.len() {
        let qi = quadratic_sum(rt, &vs[i])?;
        if !qi.is_zero() {
            out.insert((primes[i], primes[i]), qi.clone());
        }
        for j in i + 1..primes.len() {
            let sum: Vec<BigRational> = vs[i].iter().zip(&vs[j]).map(|(a, b)| a + b).collect();
            let cross = quadratic_sum(rt, &sum)? - &qi - quadratic_sum(rt, &vs[j])?;
            if !cross.is_zero() {
                out.insert((primes[i], primes[j]), cross);
            }
        }
    }
    Ok(out)
}

/// Word over the symmetric generating set (`2i` generator `i`, `2i + 1`
/// its inverse) with the geodesic it determines.
#[derive(Debug, Clone)]
pub struct SpectrumEntry {
    pub word: Vec<usize>,
    pub length: GeodesicLength,
}

#[derive(Debug, Clone)]
pub struct SpectrumSample {
    pub generators: Vec<MatrixQ>,
    /// Distinct values of `t`, ordered by length.
    pub entries: Vec<SpectrumEntry>,
}

/// Freely reduced words of length 1 to `max_len`, in shortlex order.
pub fn reduced_words(n_gens: usize, max_len: usize) -> Vec<Vec<usize>> {
    let letters = 2 * n_gens;
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..letters {
                if w.last().is_some_and(|&p| p ^ 1 == l) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Hyperbolic elements among reduced words up to `word_length`, merged by
/// exact equality of `t`.
pub fn rational_length_spectrum(
    generators: &[MatrixQ],
    word_length: usize,
    bits: u32,
) -> Result<SpectrumSample, SpectraError> {
    let mut sym = Vec::new();
    for g in generators {
        if g.rows() != 2 || g.cols() != 2 || !g.det().is_one() {
            return Err(SpectraError::NotSl2);
        }
        sym.push(g.clone());
        sym.push(g.inverse()?);
    }
    let words = reduced_words(generators.len(), word_length);
    let traces: Vec<BigRational> = words
        .par_iter()
        .map(|w| {
            let mut m = MatrixQ::identity(2);
            for &l in w {
                m = m.mul(&sym[l]);
            }
            m.trace().abs()
        })
        .collect();
    // t is determined by |trace|; keep the first word per trace
    let mut first: BTreeMap<BigRational, usize> = BTreeMap::new();
    for (i, tr) in traces.iter().enumerate() {
        if *tr > rat(2) {
            first.entry(tr.clone()).or_insert(i);
        }
    }
    let mut entries: Vec<SpectrumEntry> = first
        .into_par_iter()
        .map(|(tr, i)| {
            Ok(SpectrumEntry {
                word: words[i].clone(),
                length: GeodesicLength::new(larger_root(&tr)?, 1, bits)?,
            })
        })
        .collect::<Result<_, SpectraError>>()?;
    // |trace| = t + 1/t is increasing in t > 1, so the trace order is the length order
    entries.sort_by(|a, b| {
        let ta = a.length.t.sort_key();
        let tb = b.length.t.sort_key();
        ta.cmp(&tb).then_with(|| a.word.cmp(&b.word))
    });
    Ok(SpectrumSample {
        generators: generators.to_vec(),
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RatioVerdict {
    /// `t1^m = t2^n` with `(m, n)` minimal; `ratio` is `l1 / l2`.
    Rational { m: u32, n: u32, ratio: BigRational },
    NoUpToBound { bound: u32 },
}

impl RatioVerdict {
    pub fn is_rational(&self) -> bool {
        matches!(self, RatioVerdict::Rational { .. })
    }
}

/// Whether `l1 / l2` is rational, detected as `t1^m = t2^n` with
/// `1 <= m, n <= bound`. Candidates come from certified log intervals and
/// are confirmed by exact arithmetic.
pub fn ratio_rational(l1: &GeodesicLength, l2: &GeodesicLength, bound: u32) -> Result<RatioVerdict, SpectraError> {
    let a = l1.t.certified_log_abs(RATIO_BITS)?;
    let b = l2.t.certified_log_abs(RATIO_BITS)?;
    for n in 1..=bound {
        // m log t1 = n log t2
        let target = b.scale(&rat(n as i64));
        let lo = (&target.lo / &a.hi).floor().to_integer();
        let hi = (&target.hi / &a.lo).ceil().to_integer();
        let lo = lo.max(BigInt::one());
        let hi = hi.min(BigInt::from(bound));
        let mut m = lo;
        while m <= hi {
            let mi = m.to_u32().expect("bounded");
            if a.scale(&rat(mi as i64)).intersects(&target) {
                let xs = [l1.t.clone(), l2.t.clone()];
                if is_relation(&xs, &[BigInt::from(mi), -BigInt::from(n)])? {
                    // l1 / l2 = (n / w1) log t1 ... = (w2 n) / (w1 m)
                    let r = BigRational::new(
                        BigInt::from(l2.winding) * BigInt::from(n),
                        BigInt::from(l1.winding) * BigInt::from(mi),
                    );
                    return Ok(RatioVerdict::Rational { m: mi, n, ratio: r });
                }
            }
            m += 1;
        }
    }
    Ok(RatioVerdict::NoUpToBound { bound })
}

#[derive(Debug, Clone)]
pub struct LengthCommensurabilityReport {
    /// `table[i][j]` compares entry `i` of the first sample with entry `j`
    /// of the second.
    pub table: Vec<Vec<RatioVerdict>>,
    pub left_matched: Vec<bool>,
    pub right_matched: Vec<bool>,
    pub aggregate: bool,
}

/// Pairwise ratio table; the aggregate holds when every entry of each
/// sample has a partner with rational length ratio in the other.
pub fn length_commensurable_samples(
    s1: &SpectrumSample,
    s2: &SpectrumSample,
    bound: u32,
) -> Result<LengthCommensurabilityReport, SpectraError> {
    if s1.entries.is_empty() || s2.entries.is_empty() {
        return Err(SpectraError::InvalidTorus("samples must be nonempty".into()));
    }
    let table: Vec<Vec<RatioVerdict>> = s1
        .entries
        .par_iter()
        .map(|a| {
            s2.entries
                .iter()
                .map(|b| ratio_rational(&a.length, &b.length, bound))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let left_matched: Vec<bool> = table.iter().map(|r| r.iter().any(|v| v.is_rational())).collect();
    let right_matched: Vec<bool> = (0..s2.entries.len())
        .map(|j| table.iter().any(|r| r[j].is_rational()))
        .collect();
    let aggregate = left_matched.iter().all(|&x| x) && right_matched.iter().all(|&x| x);
    Ok(LengthCommensurabilityReport {
        table,
        left_matched,
        right_matched,
        aggregate,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcScaling {
    pub c_sum: BigRational,
    pub b_sum: BigRational,
    pub ratio: BigRational,
    pub expected: BigRational,
}

impl BcScaling {
    pub fn holds(&self) -> bool {
        self.ratio == self.expected
    }
}

/// `(2n + 2) / (2n - 1)`.
pub fn bc_expected_ratio(n: u32) -> BigRational {
    ratio(2 * n as i64 + 2, 2 * n as i64 - 1)
}

/// Ratio of the C_n and B_n quadratic sums on the same log vector.
pub fn bc_scaling_check(n: u32, x: &[BigRational]) -> Result<BcScaling, SpectraError> {
    if n < 2 {
        return Err(SpectraError::RootSys(RootSysError::InvalidType(format!("rank {n} < 2"))));
    }
    if x.len() != n as usize {
        return Err(SpectraError::DimensionMismatch {
            expected: n as usize,
            got: x.len(),
        });
    }
    if x.iter().all(|v| v.is_zero()) {
        return Err(SpectraError::ZeroVector);
    }
    let c_sum = quadratic_sum(&RootSystemType::new(Family::C, n)?, x)?;
    let b_sum = quadratic_sum(&RootSystemType::new(Family::B, n)?, x)?;
    let ratio = &c_sum / &b_sum;
    Ok(BcScaling {
        c_sum,
        b_sum,
        ratio,
        expected: bc_expected_ratio(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    fn m(r: &[&[i64]]) -> MatrixQ {
        MatrixQ::from_ints(r)
    }

    #[test]
    fn golden_length() {
        let l = hyperbolic_length(&m(&[&[2, 1], &[1, 1]]), 64).unwrap();
        // the whole enclosure rounds to 1.9248473002 at ten decimals
        let dec = RationalInterval::new(ratio(192484730015, 100000000000), ratio(192484730025, 100000000000));
        assert!(dec.contains(&l.numeric.lo) && dec.contains(&l.numeric.hi));
        assert!(l.numeric.width() <= crate::exactnum::rational::from_f64(1e-9));
        let neg = hyperbolic_length(&m(&[&[-2, -1], &[-1, -1]]), 64).unwrap();
        assert_eq!(neg.t, l.t);
        assert_eq!(hyperbolic_length(&m(&[&[1, 1], &[0, 1]]), 64).unwrap_err(), SpectraError::NotHyperbolic);
    }

    #[test]
    fn lambda_of_rational_torus() {
        let a1 = RootSystemType::new(Family::A, 1).unwrap();
        let e = SplitTorusElement::new(
            a1,
            vec![
                AlgebraicNumber::from_rational(rat(2)),
                AlgebraicNumber::from_rational(ratio(1, 2)),
            ],
        )
        .unwrap();
        let l = lambda_gamma(&e, 64).unwrap();
        assert_eq!(l.exact_string().unwrap(), "8*log(2)^2");
        let v = 8.0 * 2f64.ln().powi(2);
        assert!((l.interval.to_f64_mid() - v).abs() < 1e-12);
        let ones = SplitTorusElement::new(a1, vec![AlgebraicNumber::one(), AlgebraicNumber::one()]).unwrap();
        assert_eq!(lambda_gamma(&ones, 64).unwrap().exact_string().unwrap(), "0");
    }

    #[test]
    fn spectrum_of_one_generator() {
        let s = rational_length_spectrum(&[m(&[&[2, 1], &[1, 1]])], 3, 64).unwrap();
        assert_eq!(s.entries.len(), 3);
        let t = &s.entries[0].length.t;
        assert_eq!(s.entries[1].length.t, t.pow(2).unwrap());
        assert_eq!(s.entries[2].length.t, t.pow(3).unwrap());
        assert!(rational_length_spectrum(&[m(&[&[2, 1], &[1, 1]])], 0, 64).unwrap().entries.is_empty());
        assert!(rational_length_spectrum(&[m(&[&[1, 1], &[0, 1]])], 4, 64).unwrap().entries.is_empty());
    }

    #[test]
    fn ratios() {
        let g = hyperbolic_length(&m(&[&[2, 1], &[1, 1]]), 64).unwrap();
        let g2 = hyperbolic_length(&m(&[&[5, 3], &[3, 2]]), 64).unwrap();
        let s = hyperbolic_length(&m(&[&[2, 1], &[3, 2]]), 64).unwrap();
        assert_eq!(
            ratio_rational(&g2, &g, 20).unwrap(),
            RatioVerdict::Rational { m: 1, n: 2, ratio: rat(2) }
        );
        assert_eq!(ratio_rational(&g, &s, 20).unwrap(), RatioVerdict::NoUpToBound { bound: 20 });
        assert!(matches!(ratio_rational(&g, &g, 20).unwrap(), RatioVerdict::Rational { m: 1, n: 1, .. }));
    }

    #[test]
    fn bc_examples() {
        let r = bc_scaling_check(3, &[rat(1), rat(2), rat(3)]).unwrap();
        assert_eq!((r.c_sum.clone(), r.b_sum.clone()), (rat(224), rat(140)));
        assert!(r.holds());
        let r = bc_scaling_check(4, &[rat(1), rat(0), rat(0), rat(0)]).unwrap();
        assert_eq!((r.c_sum.clone(), r.b_sum.clone(), r.ratio.clone()), (rat(20), rat(14), ratio(10, 7)));
        // all roots of C2 and B2 on (1, 1)
        let r = bc_scaling_check(2, &[rat(1), rat(1)]).unwrap();
        assert_eq!((r.c_sum.clone(), r.b_sum.clone(), r.ratio), (rat(24), rat(12), rat(2)));
        assert_eq!(bc_scaling_check(2, &[rat(0), rat(0)]).unwrap_err(), SpectraError::ZeroVector);
    }
}
