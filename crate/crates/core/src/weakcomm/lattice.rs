//! Integer lattice toolkit: integral LLL, Hermite normal form, integer
//! kernels, exact Gram-Schmidt norms and short-vector enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IntRow = Vec<BigInt>;

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= q * s;
    }
}

fn round_div(a: &BigInt, d: &BigInt) -> BigInt {
    // nearest integer to a/d for d > 0
    let two = BigInt::from(2);
    (a * &two + d).div_floor(&(d * &two))
}

/// Integral LLL with `delta = 99/100` on linearly independent rows.
/// Returns the reduced basis and the Gram-Schmidt determinants
/// `d_0 = 1, d_i = prod_{j <= i} |b*_j|^2`.
pub fn lll(basis: &[IntRow]) -> (Vec<IntRow>, Vec<BigInt>) {
    let n = basis.len();
    let mut b: Vec<IntRow> = basis.to_vec();
    if n == 0 {
        return (b, vec![BigInt::one()]);
    }
    // 1-indexed storage
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    d[1] = dot(&b[0], &b[0]);
    assert!(!d[1].is_zero(), "lll: dependent rows");
    let mut k = 2usize;
    let mut kmax = 1usize;
    let red = |k: usize, l: usize, b: &mut Vec<IntRow>, lam: &mut Vec<Vec<BigInt>>, d: &[BigInt]| {
        if (&lam[k][l] * BigInt::from(2)).abs() > d[l] {
            let q = round_div(&lam[k][l], &d[l]);
            let src = b[l - 1].clone();
            axpy(&mut b[k - 1], &q, &src);
            let dl = d[l].clone();
            lam[k][l] -= &q * dl;
            for i in 1..l {
                let t = &q * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    };
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k - 1], &b[j - 1]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "lll: dependent rows");
                    d[k] = u;
                }
            }
        }
        red(k, k - 1, &mut b, &mut lam, &d);
        let lhs = BigInt::from(100) * &d[k] * &d[k - 2];
        let rhs = BigInt::from(99) * &d[k - 1] * &d[k - 1] - BigInt::from(100) * &lam[k][k - 1] * &lam[k][k - 1];
        if lhs < rhs {
            b.swap(k - 1, k - 2);
            for j in 1..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let bb = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k];
            }
            d[k - 1] = bb;
            if k > 2 {
                k -= 1;
            }
        } else {
            for l in (1..k - 1).rev() {
                red(k, l, &mut b, &mut lam, &d);
            }
            k += 1;
        }
    }
    (b, d)
}

/// Gram-Schmidt determinants of independent rows (as returned by [`lll`]).
pub fn gram_schmidt_d(b: &[IntRow]) -> Vec<BigInt> {
    let n = b.len();
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    for k in 1..=n {
        for j in 1..=k {
            let mut u = dot(&b[k - 1], &b[j - 1]);
            for i in 1..j {
                u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
            }
            if j < k {
                lam[k][j] = u;
            } else {
                d[k] = u;
            }
        }
    }
    d
}

/// Squared Gram-Schmidt norms `|b*_i|^2 = d_i / d_{i-1}`.
pub fn gram_schmidt_norms(b: &[IntRow]) -> Vec<BigRational> {
    let d = gram_schmidt_d(b);
    (1..d.len())
        .map(|i| BigRational::new(d[i].clone(), d[i - 1].clone()))
        .collect()
}

/// Row-style Hermite normal form pivoting only on the first `pivot_cols`
/// columns; zero rows (in the pivot part) are moved to the end and
/// returned separately.
fn hnf_partial(rows: &[IntRow], pivot_cols: usize) -> (Vec<IntRow>, Vec<IntRow>) {
    let mut m: Vec<IntRow> = rows.to_vec();
    let mut piv = 0usize;
    let mut pivots = Vec::new();
    for c in 0..pivot_cols {
        if piv >= m.len() {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c among rows >= piv
            let best = (piv..m.len())
                .filter(|&r| !m[r][c].is_zero())
                .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
            let Some(best) = best else { break };
            m.swap(piv, best);
            let mut done = true;
            for r in piv + 1..m.len() {
                if !m[r][c].is_zero() {
                    let q = m[r][c].div_floor(&m[piv][c]);
                    let src = m[piv].clone();
                    axpy(&mut m[r], &q, &src);
                    if !m[r][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if piv < m.len() && !m[piv][c].is_zero() {
            if m[piv][c].is_negative() {
                for x in m[piv].iter_mut() {
                    *x = -x.clone();
                }
            }
            for r in 0..piv {
                if !m[r][c].is_zero() {
                    let q = m[r][c].div_floor(&m[piv][c]);
                    let src = m[piv].clone();
                    axpy(&mut m[r], &q, &src);
                }
            }
            pivots.push(c);
            piv += 1;
        }
    }
    let rest = m.split_off(piv);
    (m, rest)
}

/// Hermite normal form of the lattice spanned by `rows` (zero rows dropped).
pub fn hnf(rows: &[IntRow]) -> Vec<IntRow> {
    let n = rows.first().map_or(0, |r| r.len());
    hnf_partial(rows, n).0
}

/// Basis of `{x in Z^m : x A = 0}` for the `m x n` matrix with rows `a`.
pub fn left_kernel(a: &[IntRow]) -> Vec<IntRow> {
    let m = a.len();
    if m == 0 {
        return Vec::new();
    }
    let n = a[0].len();
    let aug: Vec<IntRow> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let (_, zero_part) = hnf_partial(&aug, n);
    let ker: Vec<IntRow> = zero_part.into_iter().map(|r| r[n..].to_vec()).collect();
    if ker.is_empty() {
        return ker;
    }
    lll(&ker).0
}

/// Rank over Q.
pub fn rank(rows: &[IntRow]) -> usize {
    hnf(rows).len()
}

/// Membership of `v` in the lattice with Hermite basis `h`.
pub fn hnf_contains(h: &[IntRow], v: &[BigInt]) -> bool {
    let mut r = v.to_vec();
    for row in h {
        let c = row.iter().position(|x| !x.is_zero()).expect("zero row in HNF");
        if r[c].is_zero() {
            continue;
        }
        let (q, rem) = r[c].div_rem(&row[c]);
        if !rem.is_zero() {
            return false;
        }
        axpy(&mut r, &q, row);
    }
    r.iter().all(|x| x.is_zero())
}

/// Canonical basis: Hermite form taken from the right (entries right of
/// each pivot vanish), each row signed so its first nonzero entry is
/// positive, rows ordered by pivot position.
pub fn canonical_basis(rows: &[IntRow]) -> Vec<IntRow> {
    let rev: Vec<IntRow> = rows
        .iter()
        .map(|r| r.iter().rev().cloned().collect())
        .collect();
    let mut out: Vec<IntRow> = hnf(&rev)
        .into_iter()
        .map(|r| {
            let r: IntRow = r.into_iter().rev().collect();
            match r.iter().find(|x| !x.is_zero()) {
                Some(x) if x.is_negative() => r.into_iter().map(|x| -x).collect(),
                _ => r,
            }
        })
        .collect();
    out.sort_by_key(|r| r.iter().rposition(|x| !x.is_zero()));
    out
}

/// Basis of the intersection of a lattice with the coordinate subspace
/// spanned by `keep` (other coordinates forced to zero).
pub fn coordinate_sublattice(basis: &[IntRow], keep: &[bool]) -> Vec<IntRow> {
    if basis.is_empty() {
        return Vec::new();
    }
    let other: Vec<IntRow> = basis
        .iter()
        .map(|r| {
            r.iter()
                .zip(keep)
                .filter(|(_, k)| !**k)
                .map(|(x, _)| x.clone())
                .collect()
        })
        .collect();
    if other[0].is_empty() {
        return hnf(basis);
    }
    let ker = left_kernel(&other);
    let vs: Vec<IntRow> = ker
        .iter()
        .map(|c| {
            let mut v = vec![BigInt::zero(); basis[0].len()];
            for (ci, row) in c.iter().zip(basis) {
                if !ci.is_zero() {
                    for (x, y) in v.iter_mut().zip(row) {
                        *x += ci * y;
                    }
                }
            }
            v
        })
        .collect();
    hnf(&vs)
}

/// Enumerate all nonzero lattice vectors `sum x_i b_i` with squared norm at
/// most `radius2`, calling `visit(v)`; `visit` may shrink the radius by
/// returning a new bound. Stops after `node_cap` search nodes; returns
/// `false` if the cap was hit.
pub fn enumerate_short<F>(basis: &[Vec<i64>], radius2: f64, node_cap: u64, mut visit: F) -> bool
where
    F: FnMut(&[i64]) -> Option<f64>,
{
    let r = basis.len();
    if r == 0 {
        return true;
    }
    let n = basis[0].len();
    let g: Vec<Vec<f64>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| (0..n).map(|k| (basis[i][k] * basis[j][k]) as f64).sum())
                .collect()
        })
        .collect();
    // q_ii and mu_ij from the Cholesky-like decomposition
    let mut q = vec![vec![0.0f64; r]; r];
    for i in 0..r {
        for j in i..r {
            let mut s = g[i][j];
            for k in 0..i {
                s -= q[k][i] * q[k][j] * q[k][k];
            }
            if i == j {
                q[i][i] = s;
            } else {
                q[i][j] = s / q[i][i];
            }
        }
    }
    let mut bound = radius2 * (1.0 + 1e-9) + 1e-9;
    let mut x = vec![0i64; r];
    let mut nodes = 0u64;
    let mut v = vec![0i64; n];

    #[allow(clippy::too_many_arguments)]
    fn rec<F: FnMut(&[i64]) -> Option<f64>>(
        i: usize,
        partial: f64,
        x: &mut Vec<i64>,
        q: &[Vec<f64>],
        basis: &[Vec<i64>],
        v: &mut Vec<i64>,
        bound: &mut f64,
        nodes: &mut u64,
        cap: u64,
        visit: &mut F,
    ) -> bool {
        let r = x.len();
        let c: f64 = -(i + 1..r).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
        let span = ((*bound - partial) / q[i][i]).max(0.0).sqrt();
        let lo = (c - span).ceil() as i64;
        let hi = (c + span).floor() as i64;
        for xi in lo..=hi {
            *nodes += 1;
            if *nodes > cap {
                return false;
            }
            let t = xi as f64 - c;
            let p = partial + q[i][i] * t * t;
            if p > *bound {
                continue;
            }
            x[i] = xi;
            if i == 0 {
                if x.iter().all(|&a| a == 0) {
                    continue;
                }
                for k in 0..v.len() {
                    v[k] = (0..r).map(|j| x[j] * basis[j][k]).sum();
                }
                if let Some(nb) = visit(v) {
                    *bound = bound.min(nb * (1.0 + 1e-9) + 1e-9);
                }
            } else if !rec(i - 1, p, x, q, basis, v, bound, nodes, cap, visit) {
                return false;
            }
        }
        x[i] = 0;
        true
    }

    rec(
        r - 1,
        0.0,
        &mut x,
        &q,
        basis,
        &mut v,
        &mut bound,
        &mut nodes,
        node_cap,
        &mut visit,
    )
}

pub fn to_i64_rows(rows: &[IntRow]) -> Option<Vec<Vec<i64>>> {
    rows.iter()
        .map(|r| r.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>())
        .collect()
}

pub fn from_i64_rows(rows: &[Vec<i64>]) -> Vec<IntRow> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<IntRow> {
        from_i64_rows(&v.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn lll_finds_short_basis() {
        let b = rows(&[&[1, 0, 0, 1345], &[0, 1, 0, 35], &[0, 0, 1, 154]]);
        let (red, d) = lll(&b);
        let n0: BigInt = dot(&red[0], &red[0]);
        // shortest vector has norm 119; delta = 0.99 guarantees within (1/0.74)^2
        assert!(n0 <= BigInt::from(218));
        // determinant of the Gram matrix is preserved
        assert_eq!(d[3], gram_schmidt_d(&b)[3]);
    }

    #[test]
    fn hnf_and_membership() {
        let b = rows(&[&[2, -1, 0], &[3, 0, -1], &[1, 1, -1]]);
        let h = hnf(&b);
        assert_eq!(h.len(), 2);
        assert!(hnf_contains(&h, &rows(&[&[5, -1, -1]])[0]));
        assert!(!hnf_contains(&h, &rows(&[&[1, 0, 0]])[0]));
        assert_eq!(canonical_basis(&b), rows(&[&[2, -1, 0], &[3, 0, -1]]));
    }

    #[test]
    fn kernels() {
        // x (1,2,3)^T = 0
        let a = rows(&[&[1], &[2], &[3]]);
        let k = left_kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((&v[0] + &v[1] * BigInt::from(2) + &v[2] * BigInt::from(3)).is_zero());
        }
        let sub = coordinate_sublattice(&rows(&[&[1, 1, 0], &[0, 1, 1]]), &[true, false, true]);
        assert_eq!(sub, rows(&[&[1, 0, -1]]));
    }

    #[test]
    fn enumeration_counts_vectors() {
        let mut count = 0;
        let full = enumerate_short(&[vec![1, 0], vec![0, 1]], 2.0, 1_000, |_| {
            count += 1;
            None
        });
        assert!(full);
        assert_eq!(count, 8);
    }
}
