//! Dense matrices over Q.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::PolyQ;
use super::rational::format_rational;
use super::ExactError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl MatrixQ {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Self { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![BigRational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self, ExactError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ExactError::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Self::new(r, c, rows.into_iter().flatten().collect()))
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged matrix rows");
                row.iter().map(|&v| BigRational::from_integer(BigInt::from(v)))
            })
            .collect();
        Self::new(r, c, data)
    }

    pub fn diagonal(d: &[BigRational]) -> Self {
        let mut m = Self::zero(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    /// Companion matrix of a monic polynomial (last column holds `-c_k`).
    pub fn companion(f: &PolyQ) -> Self {
        let f = f.monic();
        let n = f.deg();
        let mut m = Self::zero(n, n);
        for i in 1..n {
            m[(i, i - 1)] = BigRational::one();
        }
        for i in 0..n {
            m[(i, n - 1)] = -f.coeff(i);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|c| c.is_integer())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut out = Self::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::new(
            self.rows,
            self.cols,
            self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::new(
            self.rows,
            self.cols,
            self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.rows, self.cols, self.data.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.rows, self.cols, self.data.iter().map(|a| -a).collect())
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols)).fold(BigRational::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Non-negative integer power of a square matrix.
    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Integer power, negative exponents via the inverse.
    pub fn pow_signed(&self, e: i64) -> Result<Self, ExactError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    /// Reduced row echelon form and its pivot columns.
    fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &f * &m[(r, j)];
                        m[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{v : self * v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> BigRational {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            let inv = piv.recip();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let v = &f * &m[(c, j)];
                    m[(i, j)] -= v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = BigRational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(ExactError::Singular);
        }
        let mut inv = Self::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// Solve `self * x = b` for a square nonsingular matrix.
    pub fn solve(&self, b: &[BigRational]) -> Result<Vec<BigRational>, ExactError> {
        let inv = self.inverse()?;
        Ok((0..self.rows)
            .map(|i| {
                inv.row(i)
                    .iter()
                    .zip(b)
                    .fold(BigRational::zero(), |acc, (a, x)| acc + a * x)
            })
            .collect())
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, x)| acc + a * x)
            })
            .collect()
    }

    /// Characteristic polynomial `det(tI - M)` via reduction to upper
    /// Hessenberg form.
    pub fn charpoly(&self) -> PolyQ {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        // similarity transform to Hessenberg form
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h[(i, m - 1)].is_zero()) else {
                continue;
            };
            if i != m {
                h.swap_rows(i, m);
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + m);
                }
            }
            if h[(m, m - 1)].is_zero() {
                continue;
            }
            let inv = h[(m, m - 1)].recip();
            for i in m + 1..n {
                if h[(i, m - 1)].is_zero() {
                    continue;
                }
                let u = &h[(i, m - 1)] * &inv;
                for j in 0..n {
                    let v = &u * &h[(m, j)];
                    h[(i, j)] -= v;
                }
                for r in 0..n {
                    let v = &u * &h[(r, i)];
                    h[(r, m)] += v;
                }
            }
        }
        // recurrence on leading principal minors
        let t = PolyQ::x();
        let mut p: Vec<PolyQ> = vec![PolyQ::one()];
        for m in 1..=n {
            let mut cur = &(&t - &PolyQ::constant(h[(m - 1, m - 1)].clone())) * &p[m - 1];
            let mut prod = BigRational::one();
            for i in 1..m {
                prod *= &h[(m - i, m - i - 1)];
                if prod.is_zero() {
                    break;
                }
                let c = &prod * &h[(m - i - 1, m - 1)];
                if !c.is_zero() {
                    cur = &cur - &p[m - i - 1].scale(&c);
                }
            }
            p.push(cur);
        }
        p.pop().unwrap()
    }

    /// Evaluate a polynomial at this (square) matrix.
    pub fn eval_poly(&self, f: &PolyQ) -> Self {
        let n = self.rows;
        let mut acc = Self::zero(n, n);
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Self::identity(n).scale(c));
        }
        acc
    }

    pub fn kronecker(&self, o: &Self) -> Self {
        let (r, c) = (self.rows * o.rows, self.cols * o.cols);
        let mut out = Self::zero(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        out[(i * o.rows + k, j * o.cols + l)] = a * &o[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// `A (x) I + I (x) B`, whose eigenvalues are the pairwise sums.
    pub fn kronecker_sum(&self, o: &Self) -> Self {
        self.kronecker(&Self::identity(o.rows))
            .add(&Self::identity(self.rows).kronecker(o))
    }

    pub fn commutes_with(&self, o: &Self) -> bool {
        self.mul(o) == o.mul(self)
    }
}

impl Index<(usize, usize)> for MatrixQ {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for MatrixQ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixQ{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{rat, ratio};

    /// Characteristic polynomial by cofactor expansion of det(tI - M) with
    /// polynomial entries; independent of the Hessenberg reduction.
    fn charpoly_by_expansion(m: &MatrixQ) -> PolyQ {
        fn det(mat: &[Vec<PolyQ>]) -> PolyQ {
            let n = mat.len();
            if n == 1 {
                return mat[0][0].clone();
            }
            let mut acc = PolyQ::zero();
            for j in 0..n {
                let minor: Vec<Vec<PolyQ>> = mat[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &mat[0][j] * &det(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
        let n = m.rows();
        let mat: Vec<Vec<PolyQ>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = PolyQ::constant(-m[(i, j)].clone());
                        if i == j {
                            &c + &PolyQ::x()
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect();
        det(&mat)
    }

    #[test]
    fn charpoly_small() {
        let g = MatrixQ::from_ints(&[&[2, 1], &[1, 1]]);
        assert_eq!(g.charpoly(), PolyQ::from_ints(&[1, -3, 1]));
        let z = MatrixQ::from_ints(&[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]);
        assert_eq!(z.charpoly(), charpoly_by_expansion(&z));
    }

    #[test]
    fn charpoly_matches_expansion() {
        let cases: Vec<MatrixQ> = vec![
            MatrixQ::from_ints(&[&[1, 2, 3], &[0, 4, 5], &[1, 0, 6]]),
            MatrixQ::from_ints(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, 3, -1, 3]]),
            MatrixQ::from_ints(&[&[0, 0, 0, 2], &[0, 0, 3, 0], &[0, 1, 0, 0], &[5, 0, 0, 0]]),
            MatrixQ::new(2, 2, vec![ratio(1, 2), rat(3), ratio(-2, 7), rat(0)]),
        ];
        for m in cases {
            assert_eq!(m.charpoly(), charpoly_by_expansion(&m), "{m}");
        }
    }

    #[test]
    fn inverse_and_det() {
        let m = MatrixQ::from_ints(&[&[2, 1], &[3, 2]]);
        assert_eq!(m.det(), rat(1));
        assert!(m.mul(&m.inverse().unwrap()).is_identity());
        let s = MatrixQ::from_ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.det(), rat(0));
        assert_eq!(s.inverse(), Err(ExactError::Singular));
        assert_eq!(s.rank(), 1);
        let ns = s.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(s.apply(&ns[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn kronecker_charpolys() {
        let a = MatrixQ::companion(&PolyQ::from_ints(&[1, -3, 1]));
        let k = a.kronecker(&a);
        // roots l1^2, l2^2, and 1 twice
        let expected = &PolyQ::from_ints(&[1, -7, 1]) * &PolyQ::from_ints(&[-1, 1]).pow(2);
        assert_eq!(k.charpoly(), expected);
        let s = a.kronecker_sum(&MatrixQ::companion(&PolyQ::from_ints(&[-2, 0, 1])));
        assert_eq!(s.charpoly().deg(), 4);
    }
}
