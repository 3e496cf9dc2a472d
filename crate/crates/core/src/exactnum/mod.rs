//! Exact arithmetic over Q: rationals, polynomials, factorization modulo
//! primes and over Q, root isolation and algebraic-number arithmetic.

pub mod algebraic;
pub mod factor;
pub mod fixed;
pub mod interval;
pub mod matrix;
pub mod modp;
pub mod poly;
pub mod rational;
pub mod roots;

pub use algebraic::AlgebraicNumber;
pub use factor::{factor_over_q, FactorizationQ};
pub use interval::{ComplexBall, RationalInterval};
pub use matrix::MatrixQ;
pub use modp::{factor_mod_p, FactorizationModP, PolyFp};
pub use poly::PolyQ;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("bad prime {0}: not prime, or it divides a leading coefficient or denominator")]
    BadPrime(u64),
    #[error("degree {degree} exceeds the supported cap {cap}")]
    DegreeTooLarge { degree: usize, cap: usize },
    #[error("zero raised to a negative power")]
    ZeroBase,
    #[error("zero polynomial has no roots")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("root isolation failed: {0}")]
    IsolationFailed(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
}
