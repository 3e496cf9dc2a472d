//! Local invariants over Q: Hilbert symbols, Witt indices of diagonal
//! quadratic forms, splitting of quaternion algebras, the B/C twin test and
//! the polynomial side of the torus correspondence between `Sp_2n` and
//! `SO_{2n+1}`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::rational::{is_prime, powmod, rat, trial_factor, valuation};
use crate::exactnum::PolyQ;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithLocalError {
    #[error("zero coefficient")]
    ZeroCoefficient,
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not palindromic")]
    NotPalindromic,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial vanishes at 1")]
    RootAtOne,
    #[error("polynomial vanishes at 0")]
    RootAtZero,
    #[error("cannot factor {0} completely")]
    Unfactored(String),
}

/// Place of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceQ {
    Finite(u64),
    Infinite,
}

impl PlaceQ {
    pub fn finite(p: u64) -> Result<Self, ArithLocalError> {
        if is_prime(p) {
            Ok(PlaceQ::Finite(p))
        } else {
            Err(ArithLocalError::NotPrime(p))
        }
    }
}

impl fmt::Display for PlaceQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceQ::Finite(p) => write!(f, "{p}"),
            PlaceQ::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticFormQ {
    diag: Vec<BigRational>,
}

impl QuadraticFormQ {
    pub fn new(diag: Vec<BigRational>) -> Result<Self, ArithLocalError> {
        if diag.is_empty() {
            return Err(ArithLocalError::BadDimension("empty form".into()));
        }
        if diag.iter().any(|a| a.is_zero()) {
            return Err(ArithLocalError::ZeroCoefficient);
        }
        Ok(Self { diag })
    }

    pub fn from_ints(diag: &[i64]) -> Result<Self, ArithLocalError> {
        Self::new(diag.iter().map(|&a| rat(a)).collect())
    }

    pub fn diag(&self) -> &[BigRational] {
        &self.diag
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn discriminant(&self) -> BigRational {
        self.diag.iter().fold(BigRational::one(), |acc, a| acc * a)
    }

    /// `prod_{i<j} (a_i, a_j)_v`.
    pub fn hasse_invariant(&self, v: PlaceQ) -> i8 {
        let mut e = 1;
        for i in 0..self.diag.len() {
            for j in i + 1..self.diag.len() {
                e *= hilbert_symbol(&self.diag[i], &self.diag[j], v);
            }
        }
        e
    }

    /// Orthogonal sum.
    pub fn perp(&self, o: &Self) -> Self {
        let mut d = self.diag.clone();
        d.extend(o.diag.iter().cloned());
        Self { diag: d }
    }

    pub fn scaled(&self, c: &BigRational) -> Result<Self, ArithLocalError> {
        Self::new(self.diag.iter().map(|a| a * c).collect())
    }

    pub fn signature(&self) -> (usize, usize) {
        let pos = self.diag.iter().filter(|a| a.is_positive()).count();
        (pos, self.diag.len() - pos)
    }
}

/// Quaternion algebra `(a, b)` over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternionAlgebraQ {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuaternionAlgebraQ {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self, ArithLocalError> {
        if a.is_zero() || b.is_zero() {
            return Err(ArithLocalError::ZeroCoefficient);
        }
        Ok(Self { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self, ArithLocalError> {
        Self::new(rat(a), rat(b))
    }
}

/// `q = p^v * u` with `u` a p-adic unit: returns `v` and the numerator and
/// denominator of `u`.
fn split(q: &BigRational, p: u64) -> (i64, BigInt, BigInt) {
    let (a, n) = valuation(q.numer(), p);
    let (b, d) = valuation(q.denom(), p);
    (a as i64 - b as i64, n, d)
}

fn legendre(x: &BigInt, p: u64) -> i8 {
    let r = x.mod_floor(&BigInt::from(p)).to_u64().expect("residue");
    debug_assert!(r != 0);
    if powmod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Unit part modulo 8 (inverse of an odd number is itself mod 8).
fn mod8(n: &BigInt, d: &BigInt) -> u64 {
    ((n * d).mod_floor(&BigInt::from(8))).to_u64().expect("residue")
}

/// Hilbert symbol `(a, b)_v` of nonzero rationals.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, v: PlaceQ) -> i8 {
    assert!(!a.is_zero() && !b.is_zero(), "hilbert symbol of zero");
    match v {
        PlaceQ::Infinite => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        PlaceQ::Finite(2) => {
            let (al, an, ad) = split(a, 2);
            let (be, bn, bd) = split(b, 2);
            let u = mod8(&an, &ad);
            let w = mod8(&bn, &bd);
            let eps = |x: u64| ((x - 1) / 2) % 2;
            let omega = |x: u64| ((x * x - 1) / 8) % 2;
            let e = eps(u) * eps(w) + (al.rem_euclid(2) as u64) * omega(w) + (be.rem_euclid(2) as u64) * omega(u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        PlaceQ::Finite(p) => {
            let (al, an, ad) = split(a, p);
            let (be, bn, bd) = split(b, p);
            let mut s: i8 = 1;
            if (al * be).rem_euclid(2) == 1 && ((p - 1) / 2) % 2 == 1 {
                s = -s;
            }
            if be.rem_euclid(2) == 1 {
                s *= legendre(&an, p) * legendre(&ad, p);
            }
            if al.rem_euclid(2) == 1 {
                s *= legendre(&bn, p) * legendre(&bd, p);
            }
            s
        }
    }
}

/// Whether `x` is a square in `Q_v`.
pub fn is_local_square(x: &BigRational, v: PlaceQ) -> bool {
    match v {
        PlaceQ::Infinite => x.is_positive(),
        PlaceQ::Finite(p) => {
            let (e, n, d) = split(x, p);
            if e.rem_euclid(2) == 1 {
                return false;
            }
            if p == 2 {
                mod8(&n, &d) == 1
            } else {
                legendre(&n, p) * legendre(&d, p) == 1
            }
        }
    }
}

/// Isotropy over `Q_p` from rank, discriminant and Hasse invariant.
fn isotropic_p(n: usize, d: &BigRational, eps: i8, v: PlaceQ) -> bool {
    let m1 = -BigRational::one();
    match n {
        0 | 1 => false,
        2 => is_local_square(&-d, v),
        3 => hilbert_symbol(&m1, &-d, v) == eps,
        4 => !is_local_square(d, v) || eps == hilbert_symbol(&m1, &m1, v),
        _ => true,
    }
}

/// Witt index of `q` over `Q_v`.
pub fn witt_index(q: &QuadraticFormQ, v: PlaceQ) -> usize {
    if v == PlaceQ::Infinite {
        let (p, m) = q.signature();
        return p.min(m);
    }
    // peel off hyperbolic planes: q = H + q' with d' = -d and
    // eps' = eps (-1, -d)
    let mut n = q.dim();
    let mut d = q.discriminant();
    let mut eps = q.hasse_invariant(v);
    let mut w = 0;
    while isotropic_p(n, &d, eps, v) {
        w += 1;
        n -= 2;
        d = -d;
        eps *= hilbert_symbol(&-BigRational::one(), &d, v);
    }
    w
}

pub fn quaternion_splits(h: &QuaternionAlgebraQ, v: PlaceQ) -> bool {
    hilbert_symbol(&h.a, &h.b, v) == 1
}

/// Complete prime factorization support of a nonzero integer, or an error
/// when a large cofactor resists trial division.
fn integer_support(n: &BigUint) -> Result<Vec<u64>, ArithLocalError> {
    if n.is_zero() {
        return Err(ArithLocalError::ZeroCoefficient);
    }
    let (mut ps, rest) = trial_factor(n, 1_000_000);
    if !rest.is_one() {
        match rest.to_u64() {
            Some(r) if is_prime(r) => ps.push(r),
            _ => return Err(ArithLocalError::Unfactored(rest.to_string())),
        }
    }
    Ok(ps)
}

/// `{inf, 2}` together with every prime dividing a numerator or
/// denominator of the given rationals. Outside this set all the local
/// invariants used here are trivial.
pub fn relevant_places(values: &[&BigRational]) -> Result<Vec<PlaceQ>, ArithLocalError> {
    let mut ps = vec![2u64];
    for q in values {
        ps.extend(integer_support(q.numer().magnitude())?);
        ps.extend(integer_support(q.denom().magnitude())?);
    }
    ps.sort_unstable();
    ps.dedup();
    let mut out: Vec<PlaceQ> = ps.into_iter().map(PlaceQ::Finite).collect();
    out.push(PlaceQ::Infinite);
    Ok(out)
}

/// Product of `(a, b)_v` over the relevant places; always 1.
pub fn hilbert_product(a: &BigRational, b: &BigRational) -> Result<i8, ArithLocalError> {
    Ok(relevant_places(&[a, b])?
        .into_iter()
        .map(|v| hilbert_symbol(a, b, v))
        .product())
}

/// Local behaviour of a group over `Q_v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalType {
    Split,
    Anisotropic,
    /// Isotropic but not split.
    Intermediate,
}

impl fmt::Display for LocalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocalType::Split => "split",
            LocalType::Anisotropic => "anisotropic",
            LocalType::Intermediate => "intermediate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinRow {
    pub place: PlaceQ,
    /// Witt index of q over `Q_v`.
    pub witt_index: usize,
    pub b_side: LocalType,
    pub quaternion_split: bool,
    pub c_side: LocalType,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinsReport {
    pub rank: usize,
    pub rows: Vec<TwinRow>,
    pub twins: bool,
}

/// Twin test for `SO(q)`, `dim q = 2n + 1 >= 7`, and the C-type group
/// `SU_n(H, h)` over the quaternion algebra `H`, where
/// `hermitian_definite_at_infinity` says whether `h` is definite at the
/// real place. At each relevant place both groups must be split or both
/// anisotropic.
pub fn twins(
    q: &QuadraticFormQ,
    h: &QuaternionAlgebraQ,
    hermitian_definite_at_infinity: bool,
) -> Result<TwinsReport, ArithLocalError> {
    let dim = q.dim();
    if dim % 2 == 0 || dim < 7 {
        return Err(ArithLocalError::BadDimension(format!(
            "twins need an odd-dimensional form of dimension at least 7, got {dim}"
        )));
    }
    let n = (dim - 1) / 2;
    let mut values: Vec<&BigRational> = q.diag().iter().collect();
    values.push(&h.a);
    values.push(&h.b);
    let places = relevant_places(&values)?;
    let rows: Vec<TwinRow> = places
        .into_iter()
        .map(|v| {
            let w = witt_index(q, v);
            let b_side = match w {
                _ if w == n => LocalType::Split,
                0 => LocalType::Anisotropic,
                _ => LocalType::Intermediate,
            };
            let quaternion_split = quaternion_splits(h, v);
            let c_side = if quaternion_split {
                LocalType::Split
            } else if v == PlaceQ::Infinite && hermitian_definite_at_infinity {
                LocalType::Anisotropic
            } else {
                // hermitian forms of rank >= 2 over a p-adic division
                // algebra are isotropic
                LocalType::Intermediate
            };
            let agree = b_side == c_side && b_side != LocalType::Intermediate;
            TwinRow {
                place: v,
                witt_index: w,
                b_side,
                quaternion_split,
                c_side,
                agree,
            }
        })
        .collect();
    let twins = rows.iter().all(|r| r.agree);
    Ok(TwinsReport { rank: n, rows, twins })
}

/// `Q[t]/(f)` with the involution `t -> 1/t`, for squarefree palindromic
/// `f` normalized to constant term 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PalindromicEtale {
    poly: PolyQ,
}

impl PalindromicEtale {
    pub fn new(f: &PolyQ) -> Result<Self, ArithLocalError> {
        if f.is_zero() || f.deg() == 0 {
            return Err(ArithLocalError::BadDimension("positive degree expected".into()));
        }
        if f.coeff(0).is_zero() {
            return Err(ArithLocalError::RootAtZero);
        }
        if !f.is_palindromic() {
            return Err(ArithLocalError::NotPalindromic);
        }
        if !f.is_squarefree() {
            return Err(ArithLocalError::NotSquarefree);
        }
        let c = f.coeff(0);
        Ok(Self {
            poly: PolyQ::new(f.coeffs().iter().map(|x| x / &c).collect()),
        })
    }

    pub fn poly(&self) -> &PolyQ {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.deg()
    }

    pub fn fixed_dimension(&self) -> usize {
        fixed_dimension(&self.poly).expect("validated")
    }

    /// The algebra `E x Q` with the identity on the new factor.
    pub fn with_fixed_factor(&self) -> Result<PolyQ, ArithLocalError> {
        bc_torus_correspondence(&self.poly)
    }
}

/// `(t - 1) f` for a palindromic squarefree `f` of even degree with
/// `f(1) != 0`: adjoining the fixed factor Q to the algebra `Q[t]/(f)`
/// with involution `t -> 1/t`.
pub fn bc_torus_correspondence(f: &PolyQ) -> Result<PolyQ, ArithLocalError> {
    if f.is_zero() || f.deg() % 2 == 1 {
        return Err(ArithLocalError::BadDimension("even degree expected".into()));
    }
    if f.eval(&rat(1)).is_zero() {
        return Err(ArithLocalError::RootAtOne);
    }
    if !f.is_palindromic() {
        return Err(ArithLocalError::NotPalindromic);
    }
    if !f.is_squarefree() {
        return Err(ArithLocalError::NotSquarefree);
    }
    Ok(&PolyQ::from_ints(&[-1, 1]) * f)
}

/// Dimension of the subalgebra of `Q[t]/(f)` fixed by `t -> 1/t`, for
/// squarefree `f` whose roots are closed under inversion (palindromic or
/// anti-palindromic). Equals the number of orbits on the roots: roots 1
/// and -1 are fixed, the rest pair up.
pub fn fixed_dimension(f: &PolyQ) -> Result<usize, ArithLocalError> {
    if f.is_zero() || f.deg() == 0 {
        return Err(ArithLocalError::BadDimension("positive degree expected".into()));
    }
    if f.coeff(0).is_zero() {
        return Err(ArithLocalError::RootAtZero);
    }
    if !(f.is_palindromic() || f.is_antipalindromic()) {
        return Err(ArithLocalError::NotPalindromic);
    }
    if !f.is_squarefree() {
        return Err(ArithLocalError::NotSquarefree);
    }
    let fixed = [rat(1), rat(-1)]
        .iter()
        .filter(|x| f.eval(x).is_zero())
        .count();
    Ok(fixed + (f.deg() - fixed) / 2)
}
