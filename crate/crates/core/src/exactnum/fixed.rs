//! Fixed-point transcendental functions on big integers. A value `v` at
//! scale `w` stands for `v / 2^w`.
//!
//! `ln_bounds` is rigorous (directed rounding plus a tail bound); the
//! angle helpers are accurate to a few units in the last place and are only
//! used where exact verification follows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{ceil_scaled, floor_scaled};

const GUARD: u32 = 24;

/// Lower and upper bounds `(lo, hi)` with `lo <= 2^w atanh(x / 2^w) <= hi`
/// for a fixed-point `0 <= x <= 2^w / 3`, both at scale `w`.
fn atanh_bounds_nonneg(x: &BigInt, w: u32) -> (BigInt, BigInt) {
    debug_assert!(!x.is_negative());
    let one = BigInt::one() << w as usize;
    let x2_lo = (x * x) >> w as usize;
    let x2_hi = -((-(x * x)) >> w as usize);
    let mut p_lo = x.clone();
    let mut p_hi = x.clone();
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut k = 0u64;
    loop {
        let d = BigInt::from(2 * k + 1);
        lo += p_lo.div_floor(&d);
        hi += p_hi.div_ceil(&d);
        p_lo = (&p_lo * &x2_lo) >> w as usize;
        p_hi = -((-(&p_hi * &x2_hi)) >> w as usize);
        k += 1;
        if p_hi <= BigInt::one() {
            // remaining terms sum to at most 9/8 of the next power
            hi += 2;
            break;
        }
        debug_assert!(p_hi < one);
    }
    (lo, hi)
}

fn atanh_bounds(x_lo: &BigInt, x_hi: &BigInt, w: u32) -> (BigInt, BigInt) {
    let lo = if x_lo.is_negative() {
        -atanh_bounds_nonneg(&-x_lo, w).1
    } else {
        atanh_bounds_nonneg(x_lo, w).0
    };
    let hi = if x_hi.is_negative() {
        -atanh_bounds_nonneg(&-x_hi, w).0
    } else {
        atanh_bounds_nonneg(x_hi, w).1
    };
    (lo, hi)
}

/// Bounds on `2^w ln 2`.
pub fn ln2_bounds(w: u32) -> (BigInt, BigInt) {
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let (lo, hi) = atanh_bounds(&floor_scaled(&third, w), &ceil_scaled(&third, w), w);
    (lo * 2, hi * 2)
}

/// Rigorous bounds `lo <= 2^w ln q <= hi` for rational `q > 0`.
pub fn ln_bounds(q: &BigRational, w: u32) -> (BigInt, BigInt) {
    assert!(q.is_positive(), "logarithm of a non-positive number");
    let ww = w + GUARD;
    let num = q.numer().clone();
    let den = q.denom().clone();
    let e = num.bits() as i64 - den.bits() as i64;
    // m = q / 2^e lies in (1/2, 2); s = (m - 1) / (m + 1)
    let (n2, d2) = if e >= 0 {
        (num, den << e as usize)
    } else {
        (num << (-e) as usize, den)
    };
    let s = BigRational::new(&n2 - &d2, &n2 + &d2);
    let (a_lo, a_hi) = atanh_bounds(&floor_scaled(&s, ww), &ceil_scaled(&s, ww), ww);
    let (l2_lo, l2_hi) = ln2_bounds(ww);
    let eb = BigInt::from(e);
    let (el_lo, el_hi) = if e >= 0 {
        (&eb * &l2_lo, &eb * &l2_hi)
    } else {
        (&eb * &l2_hi, &eb * &l2_lo)
    };
    let lo: BigInt = el_lo + a_lo * 2;
    let hi: BigInt = el_hi + a_hi * 2;
    (lo >> GUARD as usize, -((-hi) >> GUARD as usize))
}

/// Rational interval enclosing `ln q` with endpoints at scale `w`.
pub fn ln_interval(q: &BigRational, w: u32) -> (BigRational, BigRational) {
    let (lo, hi) = ln_bounds(q, w);
    let den = BigInt::one() << w as usize;
    (BigRational::new(lo, den.clone()), BigRational::new(hi, den))
}

/// `2^w atan(1/n)` by the alternating series.
fn atan_inv(n: u64, w: u32) -> BigInt {
    let nb = BigInt::from(n);
    let n2 = &nb * &nb;
    let mut pw = (BigInt::one() << w as usize) / &nb;
    let mut acc = BigInt::zero();
    let mut k = 0u64;
    while !pw.is_zero() {
        let term = &pw / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        pw /= &n2;
        k += 1;
    }
    acc
}

/// `2^w pi` (Machin's formula), accurate to a few ulps.
pub fn pi_fixed(w: u32) -> BigInt {
    let ww = w + GUARD;
    let v = atan_inv(5, ww) * 16 - atan_inv(239, ww) * 4;
    v >> GUARD as usize
}

/// `atan(t)` for a fixed-point `|t| <= 1`.
fn atan_small(t: &BigInt, w: u32) -> BigInt {
    if t.is_negative() {
        return -atan_small(&-t, w);
    }
    let one = BigInt::one() << w as usize;
    let one2 = &one * &one;
    // two argument halvings: atan t = 2 atan(t / (1 + sqrt(1 + t^2)))
    let mut x = t.clone();
    for _ in 0..2 {
        let r = (&one2 + &x * &x).sqrt();
        x = (&x << w as usize) / (&one + r);
    }
    let x2 = (&x * &x) >> w as usize;
    let mut pw = x.clone();
    let mut acc = BigInt::zero();
    let mut k = 0u64;
    while !pw.is_zero() {
        let term = &pw / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        pw = (&pw * &x2) >> w as usize;
        k += 1;
    }
    acc * 4
}

/// `2^w atan2(y, x)` in `(-pi, pi]` for fixed-point inputs at scale `w`.
pub fn atan2_fixed(y: &BigInt, x: &BigInt, w: u32) -> BigInt {
    let ww = w + GUARD;
    if x.is_zero() && y.is_zero() {
        return BigInt::zero();
    }
    let pi = pi_fixed(ww);
    let half_pi: BigInt = &pi >> 1;
    let out = if y.abs() <= x.abs() {
        let t = (y << ww as usize) / x;
        let a = atan_small(&t, ww);
        if x.is_positive() {
            a
        } else if !y.is_negative() {
            a + &pi
        } else {
            a - &pi
        }
    } else {
        let t = (x << ww as usize) / y;
        let a = atan_small(&t, ww);
        if y.is_positive() {
            half_pi - a
        } else {
            -half_pi - a
        }
    };
    out >> GUARD as usize
}

/// `2^w ln|z|` approximately, for a fixed-point complex `z` at scale `w`.
pub fn ln_abs_fixed(re: &BigInt, im: &BigInt, w: u32) -> BigInt {
    let n2 = re * re + im * im;
    assert!(!n2.is_zero(), "logarithm of zero");
    let q = BigRational::new(n2, BigInt::one() << (2 * w) as usize);
    let (lo, hi) = ln_bounds(&q, w + 2);
    (lo + hi) >> 4usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{ratio, to_f64};

    fn f(v: &BigInt, w: u32) -> f64 {
        to_f64(&BigRational::new(v.clone(), BigInt::one() << w as usize))
    }

    #[test]
    fn ln_brackets_known_values() {
        for (q, expect) in [
            (ratio(2, 1), std::f64::consts::LN_2),
            (ratio(1, 3), -(3f64).ln()),
            (ratio(1000, 7), (1000f64 / 7.0).ln()),
            (ratio(1, 1), 0.0),
        ] {
            let (lo, hi) = ln_bounds(&q, 60);
            assert!(lo <= hi);
            assert!(&hi - &lo <= BigInt::from(8));
            assert!((f(&lo, 60) - expect).abs() < 1e-12, "{q}");
        }
    }

    #[test]
    fn ln_bounds_bracket_via_exp_series() {
        // exp(x) for 0 < x < 1 enclosed by a truncated series plus the
        // remainder bound 2 x^N / N!; the bracket must straddle q.
        let exp_enclosure = |x: &BigRational| {
            let mut acc = BigRational::zero();
            let mut term = BigRational::one();
            for k in 1..40 {
                acc += &term;
                term = &term * x / BigRational::from_integer(BigInt::from(k));
            }
            (acc.clone(), acc + term * BigRational::from_integer(BigInt::from(2)))
        };
        for q in [ratio(3, 2), ratio(2, 1), ratio(9, 7)] {
            let (lo, hi) = ln_interval(&q, 40);
            assert!(exp_enclosure(&lo).1 < q, "{q}");
            assert!(exp_enclosure(&hi).0 > q, "{q}");
        }
    }

    #[test]
    fn pi_and_atan() {
        let w = 80;
        assert!((f(&pi_fixed(w), w) - std::f64::consts::PI).abs() < 1e-15);
        let one = BigInt::one() << w as usize;
        let z = BigInt::zero();
        assert!((f(&atan2_fixed(&one, &one, w), w) - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((f(&atan2_fixed(&z, &(-&one), w), w) - std::f64::consts::PI).abs() < 1e-15);
        assert!((f(&atan2_fixed(&(-&one), &z, w), w) + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let y = &one * 2;
        let x = -&one;
        assert!((f(&atan2_fixed(&y, &x, w), w) - (2f64).atan2(-1.0)).abs() < 1e-15);
    }
}
