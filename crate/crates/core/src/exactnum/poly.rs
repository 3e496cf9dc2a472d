//! Dense univariate polynomials over Q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::format_rational;

/// Polynomial with rational coefficients, ascending degree, no trailing
/// zeros. The zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    coeffs: Vec<BigRational>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `t`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `t - r`.
    pub fn linear_root(r: &BigRational) -> Self {
        Self::new(vec![-r.clone(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().recip();
        self.scale(&inv)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigRational::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(c)
    }

    /// Polynomial long division; panics on division by zero.
    pub fn div_rem(&self, d: &PolyQ) -> (PolyQ, PolyQ) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return (PolyQ::zero(), self.clone());
        }
        let inv = d.lead().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (PolyQ::new(q), PolyQ::new(r))
    }

    pub fn rem(&self, d: &PolyQ) -> PolyQ {
        self.div_rem(d).1
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &PolyQ) -> Option<PolyQ> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(a: &PolyQ, b: &PolyQ) -> PolyQ {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            // keep coefficient growth in check
            y = r.monic();
        }
        x.monic()
    }

    pub fn pow(&self, mut e: u32) -> PolyQ {
        let mut base = self.clone();
        let mut acc = PolyQ::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self(g(t))`.
    pub fn compose(&self, g: &PolyQ) -> PolyQ {
        let mut acc = PolyQ::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &PolyQ::constant(c.clone());
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        if self.deg() == 0 {
            return true;
        }
        PolyQ::gcd(self, &self.derivative()).deg() == 0
    }

    /// `self / gcd(self, self')`, monic.
    pub fn squarefree_part(&self) -> PolyQ {
        if self.deg() == 0 {
            return PolyQ::one();
        }
        let g = PolyQ::gcd(self, &self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// Reciprocal polynomial `t^deg f(1/t)`.
    pub fn reversed(&self) -> PolyQ {
        let mut c = self.coeffs.clone();
        c.reverse();
        PolyQ::new(c)
    }

    /// Coefficient k equals coefficient deg-k.
    pub fn is_palindromic(&self) -> bool {
        !self.is_zero() && self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Coefficient k equals minus coefficient deg-k.
    pub fn is_antipalindromic(&self) -> bool {
        !self.is_zero()
            && self
                .coeffs
                .iter()
                .zip(self.coeffs.iter().rev())
                .all(|(a, b)| a == &-b)
    }

    /// `f(-t)`.
    pub fn negate_variable(&self) -> PolyQ {
        PolyQ::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `f(t / r) * r^deg`, the polynomial whose roots are `r` times the
    /// roots of `f`.
    pub fn scale_roots(&self, r: &BigRational) -> PolyQ {
        let n = self.deg();
        let mut pw = BigRational::one();
        let mut out = vec![BigRational::zero(); n + 1];
        for k in (0..=n).rev() {
            out[k] = &self.coeffs[k] * &pw;
            pw *= r;
        }
        PolyQ::new(out)
    }

    /// Primitive integer polynomial with positive leading coefficient and
    /// the same roots.
    pub fn to_primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for c in ints.iter_mut() {
                *c /= &g;
            }
        }
        if ints.last().is_some_and(|c| c.is_negative()) {
            for c in ints.iter_mut() {
                *c = -c.clone();
            }
        }
        ints
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Cyclotomic polynomial `Phi_k`.
    pub fn cyclotomic(k: u64) -> PolyQ {
        assert!(k >= 1);
        let mut f = PolyQ::one().shift(k as usize) - PolyQ::one();
        for d in 1..k {
            if k % d == 0 {
                f = f.exact_div(&PolyQ::cyclotomic(d)).expect("cyclotomic divides");
            }
        }
        f
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                let s = format_rational(&mag);
                if k > 0 && !mag.is_integer() {
                    write!(f, "({s})")?;
                } else {
                    write!(f, "{s}")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyQ({self})")
    }
}

impl Add for &PolyQ {
    type Output = PolyQ;
    fn add(self, o: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyQ::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &PolyQ {
    type Output = PolyQ;
    fn sub(self, o: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyQ::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &PolyQ {
    type Output = PolyQ;
    fn mul(self, o: &PolyQ) -> PolyQ {
        if self.is_zero() || o.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyQ::new(out)
    }
}

impl Neg for &PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PolyQ {
            type Output = PolyQ;
            fn $m(self, o: PolyQ) -> PolyQ {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{rat, ratio};

    #[test]
    fn division_identity() {
        let a = PolyQ::from_ints(&[1, -3, 0, 2, 5]);
        let b = PolyQ::from_ints(&[2, 0, 3]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = PolyQ::from_ints(&[-1, 1]); // t-1
        let g = PolyQ::from_ints(&[1, 1]); // t+1
        let h = &(&f * &f) * &g;
        assert!(!h.is_squarefree());
        assert_eq!(h.squarefree_part(), &f * &g);
        assert_eq!(PolyQ::gcd(&h, &(&f * &PolyQ::from_ints(&[3, 1]))), f);
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(PolyQ::cyclotomic(1), PolyQ::from_ints(&[-1, 1]));
        assert_eq!(PolyQ::cyclotomic(4), PolyQ::from_ints(&[1, 0, 1]));
        assert_eq!(PolyQ::cyclotomic(6), PolyQ::from_ints(&[1, -1, 1]));
        assert_eq!(PolyQ::cyclotomic(12).deg(), 4);
    }

    #[test]
    fn palindromes_and_display() {
        let f = PolyQ::from_ints(&[1, -3, 1, -3, 1]);
        assert!(f.is_palindromic());
        let g = &PolyQ::from_ints(&[-1, 1]) * &f;
        assert!(g.is_antipalindromic());
        assert_eq!(g.to_string(), "t^5 - 4t^4 + 4t^3 - 4t^2 + 4t - 1");
        assert_eq!(PolyQ::new(vec![ratio(1, 2), rat(0), ratio(-3, 4)]).to_string(), "-(3/4)t^2 + 1/2");
    }

    #[test]
    fn primitive_integer_form() {
        let f = PolyQ::new(vec![ratio(1, 2), ratio(-1, 3)]);
        assert_eq!(f.to_primitive_integer(), vec![BigInt::from(-3), BigInt::from(2)]);
    }

    #[test]
    fn scaled_roots() {
        let f = PolyQ::from_ints(&[-2, 1]); // root 2
        assert_eq!(f.scale_roots(&rat(3)), PolyQ::from_ints(&[-6, 1]));
    }
}
