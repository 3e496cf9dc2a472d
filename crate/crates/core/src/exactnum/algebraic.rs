//! Exact algebraic numbers as (minimal polynomial, isolating disk).
//!
//! Arithmetic goes through characteristic polynomials of companion-matrix
//! Kronecker products, whose roots are all products (or sums) of
//! conjugates; the result is the unique root of an irreducible factor that
//! meets a certified ball enclosure of the value.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::factor::factor_over_q;
use super::fixed::{atan2_fixed, ln_interval, pi_fixed};
use super::interval::{ComplexBall, ComplexBox, RationalInterval};
use super::matrix::MatrixQ;
use super::poly::PolyQ;
use super::rational::{floor_scaled, format_rational, from_scaled, to_f64};
use super::roots::{isolate_roots, IsolatedRoot};
use super::ExactError;

const SELECT_MAX_PREC: u32 = 1 << 16;

#[derive(Clone)]
pub struct AlgebraicNumber {
    minpoly: PolyQ,
    root: IsolatedRoot,
}

impl AlgebraicNumber {
    pub fn from_rational(q: BigRational) -> Self {
        let prec = 64;
        let b = ComplexBall::from_rational(&q, prec);
        Self {
            minpoly: PolyQ::linear_root(&q),
            root: IsolatedRoot {
                re: b.re,
                im: BigInt::zero(),
                rad: b.rad,
                prec,
                real: true,
            },
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// All roots of a monic irreducible polynomial.
    pub fn roots_of_irreducible(g: &PolyQ) -> Result<Vec<Self>, ExactError> {
        let g = g.monic();
        if g.deg() == 1 {
            return Ok(vec![Self::from_rational(-g.coeff(0))]);
        }
        Ok(isolate_roots(&g, 32)?
            .into_iter()
            .map(|root| Self {
                minpoly: g.clone(),
                root,
            })
            .collect())
    }

    /// All roots of `f` repeated by multiplicity, grouped by irreducible
    /// factor.
    pub fn roots_with_multiplicity(f: &PolyQ) -> Result<Vec<Self>, ExactError> {
        let fac = factor_over_q(f)?;
        let mut out = Vec::new();
        for (g, m) in &fac.factors {
            let rs = Self::roots_of_irreducible(g)?;
            for _ in 0..*m {
                out.extend(rs.iter().cloned());
            }
        }
        Ok(out)
    }

    pub fn minpoly(&self) -> &PolyQ {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        (self.minpoly.deg() == 1).then(|| -self.minpoly.coeff(0))
    }

    pub fn is_rational(&self) -> bool {
        self.minpoly.deg() == 1
    }

    pub fn is_zero(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.root.real
    }

    /// Exact test against 1: the minimal polynomial is `t - 1`.
    pub fn equals_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// Current isolating box.
    pub fn isolating_box(&self) -> ComplexBox {
        match self.as_rational() {
            Some(q) => ComplexBox::point(q, BigRational::zero()),
            None => self.root.to_box(),
        }
    }

    /// Same number with an isolating disk of radius at most
    /// `2^-(bits+1)`.
    pub fn refine(&self, bits: u32) -> Result<Self, ExactError> {
        if self.root.prec >= bits + 1
            && self.root.rad <= (BigInt::one() << (self.root.prec - bits - 1) as usize)
        {
            return Ok(self.clone());
        }
        if let Some(q) = self.as_rational() {
            let prec = bits + 2;
            let b = ComplexBall::from_rational(&q, prec);
            return Ok(Self {
                minpoly: self.minpoly.clone(),
                root: IsolatedRoot {
                    re: b.re,
                    im: BigInt::zero(),
                    rad: b.rad,
                    prec,
                    real: true,
                },
            });
        }
        let cur = self.root.to_box();
        let mut b = bits;
        loop {
            let hits: Vec<IsolatedRoot> = isolate_roots(&self.minpoly, b)?
                .into_iter()
                .filter(|r| r.to_box().intersects(&cur))
                .collect();
            if hits.len() == 1 {
                let root = hits.into_iter().next().unwrap();
                return Ok(Self {
                    minpoly: self.minpoly.clone(),
                    root,
                });
            }
            if b > SELECT_MAX_PREC {
                return Err(ExactError::IsolationFailed("refinement did not converge".into()));
            }
            b += 32;
        }
    }

    /// Ball enclosure at scale `prec` with radius of a few ulps.
    pub fn ball(&self, prec: u32) -> Result<ComplexBall, ExactError> {
        if let Some(q) = self.as_rational() {
            return Ok(ComplexBall::from_rational(&q, prec));
        }
        let r = self.refine(prec)?;
        let src = r.root.to_ball();
        let sh = (src.prec - prec) as usize;
        let im = if r.root.real {
            BigInt::zero()
        } else {
            &src.im >> sh
        };
        Ok(ComplexBall {
            re: &src.re >> sh,
            im,
            rad: -((-src.rad) >> sh) + 2,
            prec,
        })
    }

    /// Index of this root among the isolated roots of its minimal
    /// polynomial at `bits`, when exactly one of them meets the box.
    fn root_index(&self, bits: u32) -> Result<Option<usize>, ExactError> {
        let cur = self.root.to_box();
        let roots = isolate_roots(&self.minpoly, bits)?;
        let hits: Vec<usize> = roots
            .iter()
            .enumerate()
            .filter(|(_, r)| r.to_box().intersects(&cur))
            .map(|(i, _)| i)
            .collect();
        Ok((hits.len() == 1).then(|| hits[0]))
    }

    fn same_root(&self, o: &Self) -> bool {
        if self.minpoly != o.minpoly {
            return false;
        }
        if self.is_rational() {
            return true;
        }
        if !self.root.to_box().intersects(&o.root.to_box()) {
            return false;
        }
        let mut b = 32;
        while b <= SELECT_MAX_PREC {
            if let (Ok(Some(i)), Ok(Some(j))) = (self.root_index(b), o.root_index(b)) {
                return i == j;
            }
            b *= 2;
        }
        panic!("isolating boxes never separated for {}", self.minpoly);
    }

    /// Approximate value.
    pub fn to_f64(&self) -> (f64, f64) {
        match self.as_rational() {
            Some(q) => (to_f64(&q), 0.0),
            None => {
                let b = self.root.to_box();
                (b.re.to_f64_mid(), if self.root.real { 0.0 } else { b.im.to_f64_mid() })
            }
        }
    }

    /// Deterministic sort key: center at 64 fractional bits.
    pub fn sort_key(&self) -> (BigInt, BigInt) {
        let b = self.ball(64).expect("refinement of a valid root");
        (b.re, b.im)
    }

    pub fn mul(&self, o: &Self) -> Result<Self, ExactError> {
        if let (Some(a), Some(b)) = (self.as_rational(), o.as_rational()) {
            return Ok(Self::from_rational(a * b));
        }
        if self.is_zero() || o.is_zero() {
            return Ok(Self::from_int(0));
        }
        if let Some(a) = self.as_rational() {
            return o.scale(&a);
        }
        if let Some(b) = o.as_rational() {
            return self.scale(&b);
        }
        let m = MatrixQ::companion(&self.minpoly).kronecker(&MatrixQ::companion(&o.minpoly));
        select_root(&m.charpoly(), |p| Ok(self.ball(p)?.mul(&o.ball(p)?)))
    }

    pub fn add(&self, o: &Self) -> Result<Self, ExactError> {
        if let (Some(a), Some(b)) = (self.as_rational(), o.as_rational()) {
            return Ok(Self::from_rational(a + b));
        }
        let m = MatrixQ::companion(&self.minpoly).kronecker_sum(&MatrixQ::companion(&o.minpoly));
        select_root(&m.charpoly(), |p| Ok(self.ball(p)?.add(&o.ball(p)?)))
    }

    /// Multiply by a nonzero rational.
    fn scale(&self, q: &BigRational) -> Result<Self, ExactError> {
        let g = self.minpoly.scale_roots(q).monic();
        select_root(&g, |p| {
            Ok(self.ball(p)?.mul(&ComplexBall::from_rational(q, p)))
        })
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::ZeroBase);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(q.recip()));
        }
        let g = self.minpoly.reversed().monic();
        select_root(&g, |p| {
            self.ball(p)?
                .inv()
                .ok_or_else(|| ExactError::IsolationFailed("ball meets zero".into()))
        })
    }

    pub fn pow(&self, k: i64) -> Result<Self, ExactError> {
        if k == 0 {
            return Ok(Self::one());
        }
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(q.pow(k as i32)));
        }
        if k == 1 {
            return Ok(self.clone());
        }
        let c = MatrixQ::companion(&self.minpoly).pow(k as u64);
        select_root(&c.charpoly(), |p| {
            self.ball(p + 8 * k.unsigned_abs().ilog2() + 8)?
                .pow(k)
                .map(|b| rescale(&b, p))
                .ok_or(ExactError::ZeroBase)
        })
    }

    /// `prod x_i^{a_i}` computed exactly.
    pub fn product(terms: &[(&AlgebraicNumber, i64)]) -> Result<Self, ExactError> {
        let mut acc = Self::one();
        for (x, a) in terms {
            if *a == 0 {
                continue;
            }
            if x.is_zero() && *a < 0 {
                return Err(ExactError::ZeroBase);
            }
            acc = acc.mul(&x.pow(*a)?)?;
        }
        Ok(acc)
    }

    /// Exact multiplicative order when this is a root of unity.
    pub fn root_of_unity_order(&self) -> Option<u64> {
        if let Some(q) = self.as_rational() {
            return if q.is_one() {
                Some(1)
            } else if q == -BigRational::one() {
                Some(2)
            } else {
                None
            };
        }
        let d = self.degree() as u64;
        if !self.minpoly.has_integer_coeffs() || self.minpoly.coeff(0).abs() != BigRational::one() {
            return None;
        }
        // phi(k) = d forces k <= 2 d^2
        (3..=2 * d * d + 2)
            .filter(|&k| euler_phi(k) == d)
            .find(|&k| PolyQ::cyclotomic(k) == self.minpoly)
    }

    /// Interval of width at most `2^-bits` containing `log|self|`.
    pub fn certified_log_abs(&self, bits: u32) -> Result<RationalInterval, ExactError> {
        if self.is_zero() {
            return Err(ExactError::ZeroBase);
        }
        let target = from_scaled(BigInt::one(), bits);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        if let Some(q) = self.as_rational() {
            let mut w = bits + 4;
            loop {
                let (lo, hi) = ln_interval(&q.abs(), w);
                let iv = RationalInterval::new(lo, hi);
                if iv.width() <= target {
                    return Ok(iv);
                }
                w += 8;
            }
        }
        let mut b = bits + 8;
        loop {
            let r = self.refine(b)?;
            let bx = r.isolating_box();
            let abs2 = if r.root.real { bx.re.square() } else { bx.abs2() };
            if abs2.lo.is_positive() {
                let (lo, _) = ln_interval(&abs2.lo, bits + 4);
                let (_, hi) = ln_interval(&abs2.hi, bits + 4);
                let iv = RationalInterval::new(lo * &half, hi * &half);
                if iv.width() <= target {
                    return Ok(iv);
                }
            }
            if b > SELECT_MAX_PREC {
                return Err(ExactError::IsolationFailed("log enclosure did not converge".into()));
            }
            b += 16;
        }
    }

    /// `2^prec log|self|`, rounded.
    pub fn log_abs_fixed(&self, prec: u32) -> Result<BigInt, ExactError> {
        let iv = self.certified_log_abs(prec + 2)?;
        Ok(floor_scaled(&iv.mid(), prec))
    }

    /// `2^prec arg(self)` in `(-pi, pi]`, accurate to a few ulps.
    pub fn arg_fixed(&self, prec: u32) -> Result<BigInt, ExactError> {
        if self.is_zero() {
            return Err(ExactError::ZeroBase);
        }
        if let Some(q) = self.as_rational() {
            return Ok(if q.is_negative() {
                pi_fixed(prec)
            } else {
                BigInt::zero()
            });
        }
        let b = self.ball(prec + 16)?;
        if self.root.real {
            return Ok(if b.re.is_negative() {
                pi_fixed(prec)
            } else {
                BigInt::zero()
            });
        }
        Ok(atan2_fixed(&b.im, &b.re, prec + 16) >> 16usize)
    }
}

fn rescale(b: &ComplexBall, prec: u32) -> ComplexBall {
    if b.prec <= prec {
        return b.clone();
    }
    let sh = (b.prec - prec) as usize;
    ComplexBall {
        re: &b.re >> sh,
        im: &b.im >> sh,
        rad: -((-&b.rad) >> sh) + 2,
        prec,
    }
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The unique root of an irreducible factor of `poly` meeting the
/// enclosure, refining the enclosure until exactly one root qualifies.
fn select_root<F>(poly: &PolyQ, enclosure: F) -> Result<AlgebraicNumber, ExactError>
where
    F: Fn(u32) -> Result<ComplexBall, ExactError>,
{
    let fac = factor_over_q(poly)?;
    let mut prec = 64;
    while prec <= SELECT_MAX_PREC {
        let ball = enclosure(prec)?;
        let bx = ball.to_box();
        let mut hits = Vec::new();
        for (g, _) in &fac.factors {
            if g.deg() == 1 {
                let q = -g.coeff(0);
                if bx.contains(&q, &BigRational::zero()) {
                    hits.push(AlgebraicNumber::from_rational(q));
                }
                continue;
            }
            for root in isolate_roots(g, prec)? {
                if root.to_box().intersects(&bx) {
                    hits.push(AlgebraicNumber {
                        minpoly: g.clone(),
                        root,
                    });
                }
            }
        }
        if hits.len() == 1 {
            return Ok(hits.pop().unwrap());
        }
        prec *= 2;
    }
    Err(ExactError::IsolationFailed("could not single out the result root".into()))
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, o: &Self) -> bool {
        self.same_root(o)
    }
}

impl Eq for AlgebraicNumber {}

impl Hash for AlgebraicNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.minpoly.hash(state);
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", format_rational(&q));
        }
        let (re, im) = self.to_f64();
        if self.root.real {
            write!(f, "root of {} near {re:.10}", self.minpoly)
        } else {
            write!(f, "root of {} near {re:.10}{im:+.10}i", self.minpoly)
        }
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alg({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{rat, ratio};

    fn quad_root(c0: i64, c1: i64, larger: bool) -> AlgebraicNumber {
        let rs = AlgebraicNumber::roots_of_irreducible(&PolyQ::from_ints(&[c0, c1, 1])).unwrap();
        let mut rs: Vec<_> = rs.into_iter().collect();
        rs.sort_by(|a, b| a.to_f64().0.partial_cmp(&b.to_f64().0).unwrap());
        if larger {
            rs.pop().unwrap()
        } else {
            rs.remove(0)
        }
    }

    #[test]
    fn products_in_quadratic_fields() {
        let phi2 = quad_root(1, -3, true); // (3+sqrt5)/2
        let sq = phi2.pow(2).unwrap();
        assert_eq!(sq.minpoly(), &PolyQ::from_ints(&[1, -7, 1]));
        assert!(sq.to_f64().0 > 6.0);
        let six = AlgebraicNumber::from_int(2).mul(&AlgebraicNumber::from_int(3)).unwrap();
        assert_eq!(six.as_rational(), Some(rat(6)));
        let a = quad_root(1, -4, true); // 2 + sqrt3
        let b = quad_root(1, -4, false);
        let one = a.mul(&b).unwrap();
        assert!(one.equals_one());
        assert!(!phi2.equals_one());
        assert!(!AlgebraicNumber::from_int(-1).equals_one());
    }

    #[test]
    fn inverse_and_negative_powers() {
        let phi2 = quad_root(1, -3, true);
        let inv = phi2.inv().unwrap();
        assert_eq!(inv, quad_root(1, -3, false));
        let p = AlgebraicNumber::product(&[(&phi2, 3), (&phi2, -3)]).unwrap();
        assert!(p.equals_one());
        let zero = AlgebraicNumber::from_int(0);
        assert_eq!(
            AlgebraicNumber::product(&[(&zero, -1)]).unwrap_err(),
            ExactError::ZeroBase
        );
    }

    #[test]
    fn equality_distinguishes_conjugates() {
        let a = quad_root(-2, 0, true);
        let b = quad_root(-2, 0, false);
        assert_ne!(a, b);
        assert_eq!(a, a.refine(200).unwrap());
        let sum = a.add(&b).unwrap();
        assert_eq!(sum.as_rational(), Some(rat(0)));
        let a2 = a.mul(&a).unwrap();
        assert_eq!(a2.as_rational(), Some(rat(2)));
    }

    #[test]
    fn roots_of_unity() {
        let i = AlgebraicNumber::roots_of_irreducible(&PolyQ::from_ints(&[1, 0, 1])).unwrap();
        assert_eq!(i[0].root_of_unity_order(), Some(4));
        assert_eq!(AlgebraicNumber::from_int(-1).root_of_unity_order(), Some(2));
        assert_eq!(AlgebraicNumber::from_int(1).root_of_unity_order(), Some(1));
        assert_eq!(quad_root(1, -3, true).root_of_unity_order(), None);
        let z = AlgebraicNumber::roots_of_irreducible(&PolyQ::cyclotomic(12)).unwrap();
        assert!(z.iter().all(|x| x.root_of_unity_order() == Some(12)));
        assert!(z[0].pow(12).unwrap().equals_one());
        // Salem quartic: palindromic with unit constant term, not cyclotomic
        let r = AlgebraicNumber::roots_of_irreducible(&PolyQ::from_ints(&[1, -1, -1, -1, 1]));
        assert!(r.unwrap().iter().all(|x| x.root_of_unity_order().is_none()));
    }

    #[test]
    fn certified_logs() {
        let phi2 = quad_root(1, -3, true);
        let iv = phi2.certified_log_abs(30).unwrap();
        assert!(iv.width() <= ratio(1, 1 << 30));
        assert!(iv.contains_f64(0.9624236501192069) || (iv.to_f64_mid() - 0.9624236501192069).abs() < 1e-9);
        let two = AlgebraicNumber::from_int(2).certified_log_abs(40).unwrap();
        assert!((two.to_f64_mid() - std::f64::consts::LN_2).abs() < 1e-11);
        let one = AlgebraicNumber::from_int(1).certified_log_abs(20).unwrap();
        assert!(one.contains(&rat(0)));
    }
}
