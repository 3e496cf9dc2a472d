//! Small helpers around `BigRational`: parsing, dyadic rounding, integer
//! square roots and prime utilities.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExactError;

/// Parse `"p/q"`, `"-p/q"` or a plain integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let t = s.trim();
    let bad = || ExactError::Parse(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    if num.is_empty() || den.is_empty() {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(ExactError::ZeroDenominator(s.to_string()));
    }
    Ok(BigRational::new(n, d))
}

/// Canonical string form `p/q` (or `p` when integral).
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `floor(q * 2^bits)`.
pub fn floor_scaled(q: &BigRational, bits: u32) -> BigInt {
    (q.numer() << bits as usize).div_floor(q.denom())
}

/// `ceil(q * 2^bits)`.
pub fn ceil_scaled(q: &BigRational, bits: u32) -> BigInt {
    -((-q.numer() << bits as usize).div_floor(q.denom()))
}

/// `m / 2^bits` as a rational.
pub fn from_scaled(m: BigInt, bits: u32) -> BigRational {
    BigRational::new(m, BigInt::one() << bits as usize)
}

/// Largest dyadic `k/2^bits` not exceeding `q`.
pub fn round_down(q: &BigRational, bits: u32) -> BigRational {
    if q.denom().is_one() {
        return q.clone();
    }
    from_scaled(floor_scaled(q, bits), bits)
}

/// Smallest dyadic `k/2^bits` not below `q`.
pub fn round_up(q: &BigRational, bits: u32) -> BigRational {
    if q.denom().is_one() {
        return q.clone();
    }
    from_scaled(ceil_scaled(q, bits), bits)
}

/// Integer square root of a non-negative integer (floor).
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative");
    n.sqrt()
}

/// `ceil(sqrt(n))` for non-negative `n`.
pub fn isqrt_ceil(n: &BigInt) -> BigInt {
    let r = isqrt(n);
    if &(&r * &r) == n {
        r
    } else {
        r + 1
    }
}

/// Best-effort conversion to `f64` that survives huge numerators and
/// denominators.
pub fn to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift > 0 {
        BigRational::new(q.numer().clone(), q.denom() << shift as usize)
    } else {
        BigRational::new(q.numer() << (-shift) as usize, q.denom().clone())
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift.clamp(-2000, 2000) as i32)
}

/// Exact conversion of an `f64` to a rational.
pub fn from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

/// Deterministic primality test for 64-bit integers (Miller-Rabin with a
/// fixed witness set that is exact below 2^64).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `<= n` (sieve of Eratosthenes).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| k as u64)
        .collect()
}

/// Reduce a rational modulo `p`; `None` when `p` divides the denominator.
pub fn rational_mod_p(q: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = q.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    let n = q.numer().mod_floor(&pb).to_u64()?;
    Some(mulmod(n, invmod(d, p), p))
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime `p` (Fermat).
pub fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powmod(a, p - 2, p)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

/// Small prime factors of |n| found by trial division up to `limit`; the
/// returned cofactor is whatever remains.
pub fn trial_factor(n: &BigUint, limit: u64) -> (Vec<u64>, BigUint) {
    let mut m = n.clone();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= limit && !m.is_one() && !m.is_zero() {
        let pb = BigUint::from(p);
        if (&m % &pb).is_zero() {
            out.push(p);
            while (&m % &pb).is_zero() {
                m /= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (out, m)
}

/// Primes dividing the numerator or denominator of `q`. Complete only for
/// integers whose large cofactor is itself prime; cofactors are returned
/// when they fit in `u64` and pass a primality test.
pub fn prime_support(q: &BigRational) -> Vec<u64> {
    let mut out = Vec::new();
    for part in [q.numer(), q.denom()] {
        let mag = part.magnitude();
        if mag.is_zero() {
            continue;
        }
        let (ps, rest) = trial_factor(mag, 100_000);
        out.extend(ps);
        if !rest.is_one() {
            if let Some(r) = rest.to_u64() {
                if is_prime(r) {
                    out.push(r);
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub fn sign_of(q: &BigRational) -> Sign {
    if q.is_zero() {
        Sign::NoSign
    } else if q.is_negative() {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert_eq!(parse_rational(" 4 / -8 ").unwrap(), ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let q = ratio(1, 3);
        let lo = round_down(&q, 20);
        let hi = round_up(&q, 20);
        assert!(lo < q && q < hi);
        assert_eq!(&hi - &lo, from_scaled(BigInt::one(), 20));
        let neg = ratio(-1, 3);
        assert!(round_down(&neg, 10) < neg && neg < round_up(&neg, 10));
    }

    #[test]
    fn primes() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        let sieve = primes_up_to(5000);
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), sieve.binary_search(&n).is_ok(), "{n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007u64 * 3));
    }

    #[test]
    fn modular_reduction() {
        assert_eq!(rational_mod_p(&ratio(1, 2), 7), Some(4));
        assert_eq!(rational_mod_p(&ratio(-1, 1), 7), Some(6));
        assert_eq!(rational_mod_p(&ratio(1, 7), 7), None);
    }

    #[test]
    fn large_to_f64() {
        let big = BigRational::new(BigInt::one() << 2000usize, BigInt::one() << 1999usize);
        assert!((to_f64(&big) - 2.0).abs() < 1e-12);
    }
}
