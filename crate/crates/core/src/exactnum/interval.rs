//! Rational intervals, rational boxes in the complex plane and fixed-point
//! complex balls with rigorous radii.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{ceil_scaled, floor_scaled, format_rational, from_scaled, to_f64};

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Self { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.contains(&super::rational::from_f64(x))
    }

    pub fn intersects(&self, o: &Self) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.hi, -&self.lo)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_negative() {
            Self::new(&self.hi * k, &self.lo * k)
        } else {
            Self::new(&self.lo * k, &self.hi * k)
        }
    }

    /// Tight enclosure of `{x^2 : x in self}`.
    pub fn square(&self) -> Self {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if self.lo.is_negative() && self.hi.is_positive() {
            Self::new(BigRational::zero(), a.max(b))
        } else {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            Self::new(lo, hi)
        }
    }

    /// Outward rounding of both endpoints to dyadics with `bits` fractional
    /// bits; keeps representations small.
    pub fn round_out(&self, bits: u32) -> Self {
        Self::new(
            from_scaled(floor_scaled(&self.lo, bits), bits),
            from_scaled(ceil_scaled(&self.hi, bits), bits),
        )
    }

    pub fn to_f64_mid(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }

    pub fn to_strings(&self) -> [String; 2] {
        [format_rational(&self.lo), format_rational(&self.hi)]
    }
}

impl fmt::Debug for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

/// Closed axis-aligned rectangle `re x im` in the complex plane.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ComplexBox {
    pub re: RationalInterval,
    pub im: RationalInterval,
}

impl ComplexBox {
    pub fn point(re: BigRational, im: BigRational) -> Self {
        Self {
            re: RationalInterval::point(re),
            im: RationalInterval::point(im),
        }
    }

    pub fn intersects(&self, o: &Self) -> bool {
        self.re.intersects(&o.re) && self.im.intersects(&o.im)
    }

    pub fn contains(&self, re: &BigRational, im: &BigRational) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    /// Larger side length.
    pub fn size(&self) -> BigRational {
        self.re.width().max(self.im.width())
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRational::zero(), &BigRational::zero())
    }

    /// Enclosure of `|z|^2` over the box.
    pub fn abs2(&self) -> RationalInterval {
        self.re.square().add(&self.im.square())
    }
}

/// Complex ball with center `(re + i im) / 2^prec` and radius
/// `rad / 2^prec`; the represented value lies in the closed disk.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplexBall {
    pub re: BigInt,
    pub im: BigInt,
    pub rad: BigInt,
    pub prec: u32,
}

fn shr_floor(x: &BigInt, k: u32) -> BigInt {
    x >> k as usize
}

fn shr_ceil(x: &BigInt, k: u32) -> BigInt {
    -((-x) >> k as usize)
}

impl ComplexBall {
    pub fn exact_int(re: BigInt, im: BigInt, prec: u32) -> Self {
        Self {
            re: re << prec as usize,
            im: im << prec as usize,
            rad: BigInt::zero(),
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::exact_int(BigInt::one(), BigInt::zero(), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let re = floor_scaled(q, prec);
        let exact = from_scaled(re.clone(), prec) == *q;
        Self {
            re,
            im: BigInt::zero(),
            rad: if exact { BigInt::zero() } else { BigInt::one() },
            prec,
        }
    }

    pub fn from_box(b: &ComplexBox, prec: u32) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        let re = floor_scaled(&b.re.mid(), prec);
        let im = floor_scaled(&b.im.mid(), prec);
        // half-diagonal <= (w_re + w_im) / 2, plus center rounding
        let half = (b.re.width() + b.im.width()) / two;
        let rad = ceil_scaled(&half, prec) + 2;
        Self { re, im, rad, prec }
    }

    /// `|center|` upper bound at scale `prec` (as |re| + |im|).
    fn mag_hi(&self) -> BigInt {
        self.re.abs() + self.im.abs()
    }

    /// `|center|` lower bound at scale `prec`.
    fn mag_lo(&self) -> BigInt {
        (&self.re * &self.re + &self.im * &self.im).sqrt()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.prec, o.prec);
        Self {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
            rad: &self.rad + &o.rad,
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.prec, o.prec);
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
            rad: &self.rad + &o.rad,
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.prec, o.prec);
        let p = self.prec;
        let re = shr_floor(&(&self.re * &o.re - &self.im * &o.im), p);
        let im = shr_floor(&(&self.re * &o.im + &self.im * &o.re), p);
        let err = self.mag_hi() * &o.rad + o.mag_hi() * &self.rad + &self.rad * &o.rad;
        let rad = shr_ceil(&err, p) + 2;
        Self { re, im, rad, prec: p }
    }

    /// Reciprocal; `None` if the ball may contain zero.
    pub fn inv(&self) -> Option<Self> {
        let p = self.prec;
        let clo = self.mag_lo();
        if clo <= self.rad {
            return None;
        }
        let n2 = &self.re * &self.re + &self.im * &self.im;
        let sh = 2 * p as usize;
        let re = (&self.re << sh).div_floor(&n2);
        let im = (-(&self.im) << sh).div_floor(&n2);
        let den = (&clo - &self.rad) * &clo;
        let rad = (&self.rad << sh).div_ceil(&den) + 2;
        Some(Self { re, im, rad, prec: p })
    }

    pub fn pow(&self, k: i64) -> Option<Self> {
        let mut base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Some(acc)
    }

    /// True when every point of the ball has modulus below `2^-bits`.
    pub fn is_below(&self, bits: u32) -> bool {
        let bound = self.mag_hi() + &self.rad;
        if bits >= self.prec {
            return bound.is_zero();
        }
        bound < (BigInt::one() << (self.prec - bits) as usize)
    }

    pub fn excludes_zero(&self) -> bool {
        self.mag_lo() > self.rad
    }

    /// Smallest box containing the ball.
    pub fn to_box(&self) -> ComplexBox {
        let p = self.prec;
        ComplexBox {
            re: RationalInterval::new(
                from_scaled(&self.re - &self.rad, p),
                from_scaled(&self.re + &self.rad, p),
            ),
            im: RationalInterval::new(
                from_scaled(&self.im - &self.rad, p),
                from_scaled(&self.im + &self.rad, p),
            ),
        }
    }

    pub fn intersects_box(&self, b: &ComplexBox) -> bool {
        self.to_box().intersects(b)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            to_f64(&from_scaled(self.re.clone(), self.prec)),
            to_f64(&from_scaled(self.im.clone(), self.prec)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{rat, ratio};

    #[test]
    fn interval_ops() {
        let a = RationalInterval::new(rat(-1), rat(2));
        let b = RationalInterval::new(rat(3), rat(4));
        assert_eq!(a.mul(&b), RationalInterval::new(rat(-4), rat(8)));
        assert_eq!(a.square(), RationalInterval::new(rat(0), rat(4)));
        assert_eq!(b.sub(&a), RationalInterval::new(rat(1), rat(5)));
        let r = RationalInterval::point(ratio(1, 3)).round_out(10);
        assert!(r.contains(&ratio(1, 3)) && r.width() > rat(0));
    }

    #[test]
    fn ball_arithmetic_encloses() {
        let p = 64;
        let third = ComplexBall::from_rational(&ratio(1, 3), p);
        let seven = ComplexBall::from_rational(&rat(7), p);
        let prod = third.mul(&seven);
        assert!(prod.intersects_box(&ComplexBox::point(ratio(7, 3), rat(0))));
        let inv = seven.inv().unwrap();
        assert!(inv.intersects_box(&ComplexBox::point(ratio(1, 7), rat(0))));
        let i = ComplexBall::exact_int(BigInt::zero(), BigInt::one(), p);
        let m1 = i.pow(2).unwrap();
        assert!(m1.intersects_box(&ComplexBox::point(rat(-1), rat(0))));
        let d = m1.add(&ComplexBall::one(p));
        assert!(d.is_below(60));
        assert!(!ComplexBall::one(p).is_below(1));
        assert!(i.pow(-3).unwrap().intersects_box(&ComplexBox::point(rat(0), rat(1))));
    }
}
