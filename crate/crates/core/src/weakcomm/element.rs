//! Semisimple elements of split classical groups with lazily computed
//! eigenvalues.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::WeakCommError;
use crate::exactnum::factor::factor_over_q;
use crate::exactnum::{AlgebraicNumber, MatrixQ, PolyQ};
use crate::rootsys::{Family, RootSystemType};

/// Ambient group of a matrix element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// `SL_n`.
    SL(usize),
    /// `Sp_{2n}` for the form `[[0, I], [-I, 0]]`; the field is the matrix size.
    Sp(usize),
    /// Split `SO_n` for the antidiagonal form; the field is the matrix size.
    SO(usize),
}

impl GroupKind {
    pub fn dim(&self) -> usize {
        match *self {
            GroupKind::SL(n) | GroupKind::Sp(n) | GroupKind::SO(n) => n,
        }
    }

    /// Root system of the group, when it is one of the supported types.
    pub fn root_system(&self) -> Option<RootSystemType> {
        match *self {
            GroupKind::SL(n) if n >= 2 => RootSystemType::new(Family::A, n as u32 - 1).ok(),
            GroupKind::Sp(n) if n % 2 == 0 => RootSystemType::new(Family::C, n as u32 / 2).ok(),
            GroupKind::SO(n) if n % 2 == 1 => RootSystemType::new(Family::B, n as u32 / 2).ok(),
            GroupKind::SO(n) => RootSystemType::new(Family::D, n as u32 / 2).ok(),
            _ => None,
        }
    }

    /// Gram matrix of the invariant bilinear form, if any.
    pub fn form(&self) -> Option<MatrixQ> {
        match *self {
            GroupKind::SL(_) => None,
            GroupKind::Sp(n) => {
                let h = n / 2;
                let mut m = MatrixQ::zero(n, n);
                for i in 0..h {
                    m[(i, h + i)] = BigRational::one();
                    m[(h + i, i)] = -BigRational::one();
                }
                Some(m)
            }
            GroupKind::SO(n) => {
                let mut m = MatrixQ::zero(n, n);
                for i in 0..n {
                    m[(i, n - 1 - i)] = BigRational::one();
                }
                Some(m)
            }
        }
    }

    /// Basis of the Lie algebra; each basis matrix has a distinguished
    /// entry (returned alongside) equal to 1 where all others vanish.
    pub fn lie_algebra_basis(&self) -> Vec<(MatrixQ, usize)> {
        let n = self.dim();
        let nn = n * n;
        // constraints on vec(X): trace zero, and X^T F + F X = 0
        let mut eqs: Vec<Vec<BigRational>> = Vec::new();
        match self.form() {
            None => {
                let mut row = vec![BigRational::zero(); nn];
                for i in 0..n {
                    row[i * n + i] = BigRational::one();
                }
                eqs.push(row);
            }
            Some(f) => {
                for a in 0..n {
                    for b in 0..n {
                        // (X^T F + F X)[a][b] = sum_k X[k][a] F[k][b] + F[a][k] X[k][b]
                        let mut row = vec![BigRational::zero(); nn];
                        for k in 0..n {
                            row[k * n + a] += &f[(k, b)];
                            row[k * n + b] += &f[(a, k)];
                        }
                        eqs.push(row);
                    }
                }
            }
        }
        let m = MatrixQ::from_rows(eqs).expect("rectangular constraint system");
        let basis = m.nullspace();
        (0..basis.len())
            .map(|k| {
                let pos = (0..nn)
                    .find(|&i| basis[k][i].is_one() && (0..basis.len()).all(|j| j == k || basis[j][i].is_zero()))
                    .expect("nullspace basis in reduced form");
                (MatrixQ::new(n, n, basis[k].clone()), pos)
            })
            .collect()
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::SL(n) => write!(f, "SL{n}"),
            GroupKind::Sp(n) => write!(f, "Sp{n}"),
            GroupKind::SO(n) => write!(f, "SO{n}"),
        }
    }
}

impl std::str::FromStr for GroupKind {
    type Err = WeakCommError;
    /// Accepts `SL3`, `Sp4`, `SO5` (case-insensitive, optional underscore).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_uppercase().replace('_', "");
        let bad = || WeakCommError::InvalidElement(format!("unknown group '{s}'"));
        let (kind, num) = if let Some(r) = t.strip_prefix("SL") {
            ("SL", r)
        } else if let Some(r) = t.strip_prefix("SP") {
            ("SP", r)
        } else if let Some(r) = t.strip_prefix("SO") {
            ("SO", r)
        } else {
            return Err(bad());
        };
        let n: usize = num.parse().map_err(|_| bad())?;
        if n < 2 {
            return Err(bad());
        }
        Ok(match kind {
            "SL" => GroupKind::SL(n),
            "SP" if n % 2 == 0 => GroupKind::Sp(n),
            "SO" if n >= 3 => GroupKind::SO(n),
            _ => return Err(bad()),
        })
    }
}

/// A rational matrix in a split classical group. Semisimplicity is checked
/// when eigenvalues are requested, so unipotent words can still be
/// represented and classified.
#[derive(Clone)]
pub struct SemisimpleElement {
    matrix: MatrixQ,
    group: GroupKind,
    charpoly: PolyQ,
    eigen: Arc<OnceLock<Result<Vec<AlgebraicNumber>, WeakCommError>>>,
}

impl SemisimpleElement {
    pub fn new(matrix: MatrixQ, group: GroupKind) -> Result<Self, WeakCommError> {
        let n = group.dim();
        if !matrix.is_square() || matrix.rows() != n {
            return Err(WeakCommError::InvalidElement(format!(
                "expected a {n}x{n} matrix for {group}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.det().is_one() {
            return Err(WeakCommError::InvalidElement(format!(
                "determinant must be 1 in {group}"
            )));
        }
        if let Some(f) = group.form() {
            if matrix.transpose().mul(&f).mul(&matrix) != f {
                return Err(WeakCommError::InvalidElement(format!(
                    "matrix does not preserve the {group} form"
                )));
            }
        }
        let charpoly = matrix.charpoly();
        Ok(Self {
            matrix,
            group,
            charpoly,
            eigen: Arc::new(OnceLock::new()),
        })
    }

    /// `SL_n` element from integer rows.
    pub fn sl_from_ints(rows: &[&[i64]]) -> Result<Self, WeakCommError> {
        let m = MatrixQ::from_ints(rows);
        let n = m.rows();
        Self::new(m, GroupKind::SL(n))
    }

    pub fn matrix(&self) -> &MatrixQ {
        &self.matrix
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn charpoly(&self) -> &PolyQ {
        &self.charpoly
    }

    /// True when the minimal polynomial is squarefree, i.e. the squarefree
    /// part of the characteristic polynomial annihilates the matrix.
    pub fn is_semisimple(&self) -> bool {
        let sf = self.charpoly.squarefree_part();
        let z = self.matrix.eval_poly(&sf);
        z.entries().iter().all(|x| x.is_zero())
    }

    /// Eigenvalues with multiplicity, sorted by decreasing real part, then
    /// decreasing imaginary part.
    pub fn eigenvalues(&self) -> Result<&[AlgebraicNumber], WeakCommError> {
        let r = self.eigen.get_or_init(|| {
            if !self.is_semisimple() {
                return Err(WeakCommError::NotSemisimple);
            }
            let fac = factor_over_q(&self.charpoly)?;
            let mut out = Vec::new();
            for (g, m) in &fac.factors {
                let rs = AlgebraicNumber::roots_of_irreducible(g)?;
                for _ in 0..*m {
                    out.extend(rs.iter().cloned());
                }
            }
            let mut keyed: Vec<_> = out.into_iter().map(|a| (a.sort_key(), a)).collect();
            keyed.sort_by(|x, y| y.0.cmp(&x.0));
            Ok(keyed.into_iter().map(|(_, a)| a).collect())
        });
        match r {
            Ok(v) => Ok(v.as_slice()),
            Err(e) => Err(e.clone()),
        }
    }

    /// Exact multiplicative order if the element has finite order.
    pub fn finite_order(&self) -> Result<Option<u64>, WeakCommError> {
        let ev = self.eigenvalues()?;
        let mut acc = 1u64;
        for x in ev {
            match x.root_of_unity_order() {
                Some(k) => acc = num_integer::lcm(acc, k),
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }

    pub fn has_infinite_order(&self) -> Result<bool, WeakCommError> {
        Ok(self.finite_order()?.is_none())
    }

    /// Conjugate `h g h^-1`.
    pub fn conjugate_by(&self, h: &MatrixQ) -> Result<Self, WeakCommError> {
        let hi = h.inverse()?;
        Self::new(h.mul(&self.matrix).mul(&hi), self.group)
    }

    pub fn mul(&self, o: &Self) -> Result<Self, WeakCommError> {
        Self::new(self.matrix.mul(&o.matrix), self.group)
    }

    pub fn pow(&self, k: i64) -> Result<Self, WeakCommError> {
        Self::new(self.matrix.pow_signed(k)?, self.group)
    }

    /// Trace of `Ad(g)` on the Lie algebra, computed by conjugating each
    /// basis element and reading off its own coordinate.
    pub fn trace_ad(&self) -> Result<BigRational, WeakCommError> {
        let gi = self.matrix.inverse()?;
        let mut acc = BigRational::zero();
        for (x, pos) in self.group.lie_algebra_basis() {
            let y = self.matrix.mul(&x).mul(&gi);
            acc += &y.entries()[pos];
        }
        Ok(acc)
    }
}

impl fmt::Debug for SemisimpleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.group, self.matrix)
    }
}
