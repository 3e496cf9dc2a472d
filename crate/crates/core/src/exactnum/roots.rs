//! Certified isolation of all complex roots of a square-free polynomial.
//!
//! Approximations come from Aberth iteration (first in `f64`, then in
//! fixed-point big integers). Each approximation `z_i` is certified by the
//! Weierstrass inclusion disk of radius `n |W_i|`,
//! `W_i = f(z_i) / (lc * prod_{j != i} (z_i - z_j))`: when these disks are
//! pairwise disjoint every disk holds exactly one root. Approximations close
//! to the real axis are snapped onto it, so a certified symmetric disk
//! proves its root is real.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::{ComplexBall, ComplexBox, RationalInterval};
use super::poly::PolyQ;
use super::rational::{from_scaled, isqrt_ceil};
use super::ExactError;

const MAX_PREC: u32 = 1 << 18;

/// One certified root: the disk with center `(re + i im) / 2^prec` and
/// radius `rad / 2^prec` contains exactly this root and no other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub re: BigInt,
    pub im: BigInt,
    pub rad: BigInt,
    pub prec: u32,
    /// The root is proven real.
    pub real: bool,
}

impl IsolatedRoot {
    pub fn to_box(&self) -> ComplexBox {
        let p = self.prec;
        let im = if self.real {
            RationalInterval::point(BigRational::zero())
        } else {
            RationalInterval::new(
                from_scaled(&self.im - &self.rad, p),
                from_scaled(&self.im + &self.rad, p),
            )
        };
        ComplexBox {
            re: RationalInterval::new(
                from_scaled(&self.re - &self.rad, p),
                from_scaled(&self.re + &self.rad, p),
            ),
            im,
        }
    }

    pub fn to_ball(&self) -> ComplexBall {
        ComplexBall {
            re: self.re.clone(),
            im: self.im.clone(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }
}

type CacheKey = (Vec<BigInt>, u32);

fn cache() -> &'static Mutex<HashMap<CacheKey, Vec<IsolatedRoot>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Vec<IsolatedRoot>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Isolate every root of the square-free polynomial `f` with disks of
/// radius at most `2^-(bits+1)`. The output is a deterministic function of
/// `(f, bits)`, sorted by center (real part, then imaginary part).
pub fn isolate_roots(f: &PolyQ, bits: u32) -> Result<Vec<IsolatedRoot>, ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let c = f.to_primitive_integer();
    let key = (c.clone(), bits);
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    if !f.is_squarefree() {
        return Err(ExactError::NotSquarefree);
    }
    let out = isolate_int(&c, bits)?;
    let mut guard = cache().lock().unwrap();
    if guard.len() > 20_000 {
        guard.clear();
    }
    guard.insert(key, out.clone());
    Ok(out)
}

fn isolate_int(c: &[BigInt], bits: u32) -> Result<Vec<IsolatedRoot>, ExactError> {
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        // exact rational root -c0/c1, as a ball of radius <= 1 ulp
        let q = BigRational::new(-c[0].clone(), c[1].clone());
        let prec = bits + 2;
        let b = ComplexBall::from_rational(&q, prec);
        return Ok(vec![IsolatedRoot {
            re: b.re,
            im: BigInt::zero(),
            rad: b.rad,
            prec,
            real: true,
        }]);
    }
    let approx = aberth_f64(c);
    let mut prec = (bits + 16).max(64);
    let mut z: Vec<(BigInt, BigInt)> = approx
        .iter()
        .map(|w| (f64_to_fixed(w.re, prec), f64_to_fixed(w.im, prec)))
        .collect();
    loop {
        aberth_fixed(c, &mut z, prec);
        if let Some(roots) = certify(c, &z, prec, bits) {
            return Ok(roots);
        }
        if prec >= MAX_PREC {
            return Err(ExactError::IsolationFailed(format!(
                "no certified isolation of a degree {n} polynomial up to {MAX_PREC} bits"
            )));
        }
        let new_prec = prec * 2;
        let sh = (new_prec - prec) as usize;
        for (x, y) in z.iter_mut() {
            *x = &*x << sh;
            *y = &*y << sh;
        }
        prec = new_prec;
    }
}

fn f64_to_fixed(x: f64, prec: u32) -> BigInt {
    if !x.is_finite() {
        return BigInt::zero();
    }
    let q = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
    super::rational::floor_scaled(&q, prec)
}

/// Aberth iteration in double precision from points on a circle.
fn aberth_f64(c: &[BigInt]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let maxc = c
        .iter()
        .map(|x| super::rational::to_f64(&BigRational::from_integer(x.clone())).abs())
        .fold(0.0f64, f64::max);
    let cf: Vec<f64> = c
        .iter()
        .map(|x| super::rational::to_f64(&BigRational::from_integer(x.clone())) / maxc)
        .collect();
    let lead = cf[n];
    // Fujiwara-style bound on root moduli
    let radius = (0..n)
        .map(|k| (cf[k] / lead).abs().powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max)
        * 2.0;
    let radius = if radius.is_finite() && radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner_f64(&cf, z[i]);
            if p == Complex64::zero() {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::one() / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::one() - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn horner_f64(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

type Cx = (BigInt, BigInt);

fn cmul(a: &Cx, b: &Cx, p: u32) -> Cx {
    (
        (&a.0 * &b.0 - &a.1 * &b.1) >> p as usize,
        (&a.0 * &b.1 + &a.1 * &b.0) >> p as usize,
    )
}

fn cdiv(a: &Cx, b: &Cx, p: u32) -> Option<Cx> {
    let n2 = &b.0 * &b.0 + &b.1 * &b.1;
    if n2.is_zero() {
        return None;
    }
    let re = ((&a.0 * &b.0 + &a.1 * &b.1) << p as usize).div_floor(&n2);
    let im = ((&a.1 * &b.0 - &a.0 * &b.1) << p as usize).div_floor(&n2);
    Some((re, im))
}

/// Fixed-point Aberth refinement until corrections fall below a few ulps.
fn aberth_fixed(c: &[BigInt], z: &mut [Cx], p: u32) {
    let n = z.len();
    let one: Cx = (BigInt::one() << p as usize, BigInt::zero());
    let scaled: Vec<BigInt> = c.iter().map(|x| x << p as usize).collect();
    let tol = BigInt::from(1u32 << 10);
    for _ in 0..200 {
        let mut max_move = BigInt::zero();
        for i in 0..n {
            let mut f = (BigInt::zero(), BigInt::zero());
            let mut df = (BigInt::zero(), BigInt::zero());
            for a in scaled.iter().rev() {
                df = cmul(&df, &z[i], p);
                df.0 += &f.0;
                df.1 += &f.1;
                f = cmul(&f, &z[i], p);
                f.0 += a;
            }
            if f.0.is_zero() && f.1.is_zero() {
                continue;
            }
            let Some(ratio) = cdiv(&f, &df, p) else { continue };
            let mut s = (BigInt::zero(), BigInt::zero());
            let mut ok = true;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let d = (&z[i].0 - &z[j].0, &z[i].1 - &z[j].1);
                match cdiv(&one, &d, p) {
                    Some(q) => {
                        s.0 += q.0;
                        s.1 += q.1;
                    }
                    None => ok = false,
                }
            }
            let w = if ok {
                let rs = cmul(&ratio, &s, p);
                let den = (&one.0 - &rs.0, -rs.1);
                cdiv(&ratio, &den, p).unwrap_or(ratio)
            } else {
                ratio
            };
            let mv = w.0.abs() + w.1.abs();
            if mv > max_move {
                max_move = mv;
            }
            z[i].0 -= &w.0;
            z[i].1 -= &w.1;
        }
        if max_move <= tol {
            break;
        }
    }
}

/// Try to certify the approximations at precision `p`; `None` when the
/// inclusion disks overlap or are too wide for `bits`.
fn certify(c: &[BigInt], z: &[Cx], p: u32, bits: u32) -> Option<Vec<IsolatedRoot>> {
    let n = z.len();
    let snap = BigInt::one() << (p / 2) as usize;
    let centers: Vec<Cx> = z
        .iter()
        .map(|(x, y)| {
            if y.abs() < snap {
                (x.clone(), BigInt::zero())
            } else {
                (x.clone(), y.clone())
            }
        })
        .collect();
    let lc2 = &c[n] * &c[n];
    let nn = BigInt::from((n * n) as u64);
    let max_rad = BigInt::one() << (p.saturating_sub(bits + 1)) as usize;
    let mut rads = Vec::with_capacity(n);
    for i in 0..n {
        // homogenized Horner: sum c_k Z^k 2^{(n-k)p}
        let zi = &centers[i];
        let mut acc: Cx = (c[n].clone(), BigInt::zero());
        for k in (0..n).rev() {
            let re = &acc.0 * &zi.0 - &acc.1 * &zi.1 + (&c[k] << ((n - k) * p as usize));
            let im = &acc.0 * &zi.1 + &acc.1 * &zi.0;
            acc = (re, im);
        }
        let mut d: Cx = (BigInt::one(), BigInt::zero());
        for (j, zj) in centers.iter().enumerate() {
            if j == i {
                continue;
            }
            let diff = (&zi.0 - &zj.0, &zi.1 - &zj.1);
            d = (
                &d.0 * &diff.0 - &d.1 * &diff.1,
                &d.0 * &diff.1 + &d.1 * &diff.0,
            );
        }
        let d2 = &d.0 * &d.0 + &d.1 * &d.1;
        if d2.is_zero() {
            return None;
        }
        let n2 = &acc.0 * &acc.0 + &acc.1 * &acc.1;
        let q = (&nn * n2).div_ceil(&(&lc2 * d2));
        let r = isqrt_ceil(&q);
        if r > max_rad {
            return None;
        }
        rads.push(r);
    }
    for i in 0..n {
        for j in i + 1..n {
            let gap = &rads[i] + &rads[j];
            let dx = (&centers[i].0 - &centers[j].0).abs();
            let dy = (&centers[i].1 - &centers[j].1).abs();
            if dx <= gap && dy <= gap {
                return None;
            }
        }
    }
    let mut out: Vec<IsolatedRoot> = centers
        .into_iter()
        .zip(rads)
        .map(|((re, im), rad)| IsolatedRoot {
            real: im.is_zero(),
            re,
            im,
            rad,
            prec: p,
        })
        .collect();
    out.sort_by(|a, b| a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im)));
    Some(out)
}

/// Approximate `f64` values of the roots (for diagnostics and ordering).
pub fn approx_roots(f: &PolyQ) -> Result<Vec<(f64, f64)>, ExactError> {
    Ok(isolate_roots(f, 53)?
        .iter()
        .map(|r| {
            let s = 2f64.powi(-(r.prec.min(1000) as i32));
            let sh = r.prec.saturating_sub(1000) as usize;
            (
                (&r.re >> sh).to_f64().unwrap_or(0.0) * s,
                (&r.im >> sh).to_f64().unwrap_or(0.0) * s,
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::ratio;

    fn contains(r: &IsolatedRoot, x: f64, y: f64) -> bool {
        let b = r.to_box();
        let eps = 1e-9;
        b.re.lo <= ratio_f(x + eps) && ratio_f(x - eps) <= b.re.hi && {
            if r.real {
                y.abs() < eps
            } else {
                b.im.lo <= ratio_f(y + eps) && ratio_f(y - eps) <= b.im.hi
            }
        }
    }

    fn ratio_f(x: f64) -> BigRational {
        BigRational::from_float(x).unwrap()
    }

    #[test]
    fn golden_ratio_squared_roots() {
        let f = PolyQ::from_ints(&[1, -3, 1]);
        let roots = isolate_roots(&f, 40).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| r.real));
        let big = (3.0 + 5f64.sqrt()) / 2.0;
        assert!(contains(&roots[1], big, 0.0));
        assert!(contains(&roots[0], 1.0 / big, 0.0));
        // sign check at the box ends brackets the root exactly
        let b = roots[1].to_box();
        let lo = f.eval(&b.re.lo);
        let hi = f.eval(&b.re.hi);
        assert!(lo.is_negative() != hi.is_negative() || lo.is_zero() || hi.is_zero());
        assert!(b.re.width() <= ratio(1, 1 << 30) * ratio(1, 1 << 10));
    }

    #[test]
    fn complex_and_clustered_roots() {
        // t^4 + 1: four primitive 8th roots of unity
        let f = PolyQ::from_ints(&[1, 0, 0, 0, 1]);
        let roots = isolate_roots(&f, 30).unwrap();
        assert_eq!(roots.len(), 4);
        assert!(roots.iter().all(|r| !r.real));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for (x, y) in [(s, s), (s, -s), (-s, s), (-s, -s)] {
            assert_eq!(roots.iter().filter(|r| contains(r, x, y)).count(), 1);
        }
        // close real roots 1 and 1 + 1/1000 along with a complex pair
        let g = &(&PolyQ::from_ints(&[-1000, 1000]) * &PolyQ::from_ints(&[-1001, 1000]))
            * &PolyQ::from_ints(&[5, 2, 1]);
        let roots = isolate_roots(&g, 20).unwrap();
        assert_eq!(roots.iter().filter(|r| r.real).count(), 2);
    }

    #[test]
    fn deterministic_output() {
        let f = PolyQ::from_ints(&[-1, -1, 0, 1]);
        cache().lock().unwrap().clear();
        let a = isolate_roots(&f, 50).unwrap();
        cache().lock().unwrap().clear();
        let b = isolate_roots(&f, 50).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().filter(|r| r.real).count(), 1);
    }
}
