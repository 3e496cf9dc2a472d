//! Galois groups of rational polynomials of degree at most 4 from
//! discriminants and cubic resolvents. Serves as an independent check of
//! Frobenius certification.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactnum::factor::{factor_over_q, rational_roots};
use crate::exactnum::rational::isqrt;
use crate::exactnum::{ExactError, MatrixQ, PolyQ};

/// Transitive groups of degree at most 4, or `Intransitive` for reducible
/// polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SmallGaloisGroup {
    Trivial,
    C2,
    C3,
    S3,
    C4,
    V4,
    D4,
    A4,
    S4,
    Intransitive,
}

impl SmallGaloisGroup {
    pub fn order(&self) -> Option<u32> {
        use SmallGaloisGroup::*;
        Some(match self {
            Trivial => 1,
            C2 => 2,
            C3 => 3,
            S3 => 6,
            C4 => 4,
            V4 => 4,
            D4 => 8,
            A4 => 12,
            S4 => 24,
            Intransitive => return None,
        })
    }
}

/// Resultant by the Sylvester determinant.
pub fn resultant(f: &PolyQ, g: &PolyQ) -> BigRational {
    let (m, n) = (f.deg(), g.deg());
    let size = m + n;
    if size == 0 {
        return BigRational::one();
    }
    let mut s = MatrixQ::zero(size, size).to_rows();
    for i in 0..n {
        for k in 0..=m {
            s[i][i + k] = f.coeff(m - k);
        }
    }
    for i in 0..m {
        for k in 0..=n {
            s[n + i][i + k] = g.coeff(n - k);
        }
    }
    MatrixQ::from_rows(s).expect("square").det()
}

/// `(-1)^(n(n-1)/2) res(f, f') / lead(f)`.
pub fn discriminant(f: &PolyQ) -> BigRational {
    let n = f.deg();
    let r = resultant(f, &f.derivative()) / f.lead();
    if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

pub fn is_rational_square(q: &BigRational) -> bool {
    if q.is_negative() {
        return false;
    }
    let sq = |n: &BigInt| {
        let r = isqrt(n);
        &r * &r == *n
    };
    sq(q.numer()) && sq(q.denom())
}

/// `x^2 + b x + c` splits over `Q(sqrt(d))`.
fn splits_over(b: &BigRational, c: &BigRational, d: &BigRational) -> bool {
    let disc = b * b - c * BigRational::from_integer(4.into());
    disc.is_zero() || is_rational_square(&disc) || is_rational_square(&(disc * d))
}

/// Galois group of a squarefree polynomial of degree 1 to 4.
pub fn galois_group(f: &PolyQ) -> Result<SmallGaloisGroup, ExactError> {
    let n = f.deg();
    if !(1..=4).contains(&n) {
        return Err(ExactError::DegreeTooLarge { degree: n, cap: 4 });
    }
    if !f.is_squarefree() {
        return Err(ExactError::NotSquarefree);
    }
    if n == 1 {
        return Ok(SmallGaloisGroup::Trivial);
    }
    if factor_over_q(f)?.factors.len() > 1 {
        return Ok(SmallGaloisGroup::Intransitive);
    }
    let f = f.monic();
    let d = discriminant(&f);
    let square = is_rational_square(&d);
    Ok(match n {
        2 => SmallGaloisGroup::C2,
        3 if square => SmallGaloisGroup::C3,
        3 => SmallGaloisGroup::S3,
        _ => {
            let (a, b, c, e) = (f.coeff(3), f.coeff(2), f.coeff(1), f.coeff(0));
            let four = BigRational::from_integer(4.into());
            // roots x1 x2 + x3 x4 and conjugates
            let res = PolyQ::new(vec![
                -(&a * &a * &e - &four * &b * &e + &c * &c),
                &a * &c - &four * &e,
                -b.clone(),
                BigRational::one(),
            ]);
            let roots = rational_roots(&res)?;
            match roots.len() {
                0 if square => SmallGaloisGroup::A4,
                0 => SmallGaloisGroup::S4,
                1 => {
                    let r = &roots[0];
                    let c4 = splits_over(&-r.clone(), &e, &d) && splits_over(&a, &(&b - r), &d);
                    if c4 {
                        SmallGaloisGroup::C4
                    } else {
                        SmallGaloisGroup::D4
                    }
                }
                _ => SmallGaloisGroup::V4,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&PolyQ::from_ints(&[-1, -1, 0, 1])), rat(-23));
        assert_eq!(discriminant(&PolyQ::from_ints(&[-1, -3, 0, 1])), rat(81));
        assert_eq!(discriminant(&PolyQ::from_ints(&[1, -3, 1])), rat(5));
    }

    #[test]
    fn classical_groups() {
        use SmallGaloisGroup::*;
        let g = |c: &[i64]| galois_group(&PolyQ::from_ints(c)).unwrap();
        assert_eq!(g(&[-1, -1, 0, 1]), S3);
        assert_eq!(g(&[-1, -3, 0, 1]), C3);
        assert_eq!(g(&[-1, -1, 0, 0, 1]), S4);
        // x^4 + 8x + 12 has group A4
        assert_eq!(g(&[12, 8, 0, 0, 1]), A4);
        assert_eq!(g(&[1, 0, 0, 0, 1]), V4);
        assert_eq!(g(&[-2, 0, 0, 0, 1]), D4);
        // fifth cyclotomic field
        assert_eq!(g(&[1, 1, 1, 1, 1]), C4);
        assert_eq!(g(&[2, 0, -3, 0, 1]), Intransitive);
    }
}
