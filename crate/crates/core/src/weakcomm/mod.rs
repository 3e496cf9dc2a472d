//! Weak commensurability, weak containment and multiplicative independence
//! of semisimple elements, decided from exact relation lattices of their
//! eigenvalues; adjoint traces and trace fields.

pub mod element;
pub mod lattice;
pub mod relations;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

pub use element::{GroupKind, SemisimpleElement};
pub use relations::{relation_lattice, RelationConfig, RelationLattice};

use crate::exactnum::{AlgebraicNumber, ExactError, MatrixQ, PolyQ};
use lattice::{coordinate_sublattice, enumerate_short, hnf_contains, lll};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeakCommError {
    #[error("element is not semisimple (minimal polynomial has a repeated factor)")]
    NotSemisimple,
    #[error("element has finite order")]
    FiniteOrder,
    #[error("logarithm precision exhausted at {bits} bits for {count} numbers")]
    PrecisionExhausted { bits: u32, count: usize },
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeakCommConfig {
    /// Exponent bound `B`.
    pub bound: i64,
    pub relation: RelationConfig,
}

impl Default for WeakCommConfig {
    fn default() -> Self {
        Self {
            bound: 20,
            relation: RelationConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// `prod lambda1^a = prod lambda2^b = common_value != 1`.
    Yes {
        witness: (Vec<i64>, Vec<i64>),
        common_value: AlgebraicNumber,
    },
    NoUpToBound { bound: i64 },
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }
}

/// Witness preference: smaller l1 norm, smaller support, support on
/// earlier (dominant) eigenvalues, fewer negative entries, then
/// lexicographically larger.
fn witness_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let key = |v: &[i64]| {
        (
            v.iter().map(|x| x.unsigned_abs()).sum::<u64>(),
            v.iter().filter(|x| **x != 0).count(),
            v.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, _)| i).collect::<Vec<_>>(),
            v.iter().filter(|x| **x < 0).count(),
        )
    };
    key(a).cmp(&key(b)).then_with(|| b.cmp(a))
}

const ENUMERATION_NODE_CAP: u64 = 4_000_000;

/// Smallest relation among `nums` with entries bounded by `bound` that is
/// not a sum of relations supported on single blocks. `present` maps a
/// lattice vector to the form used for ranking.
fn mixed_relation(
    nums: &[AlgebraicNumber],
    blocks: &[usize],
    cfg: &WeakCommConfig,
    present: &dyn Fn(&[i64]) -> Vec<i64>,
) -> Result<Option<Vec<i64>>, WeakCommError> {
    let n = nums.len();
    let (basis, _, _) = relations::raw_lattice(nums, cfg.bound, &cfg.relation)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let mut block_lats = Vec::new();
    let mut start = 0;
    for &len in blocks {
        let keep: Vec<bool> = (0..n).map(|i| i >= start && i < start + len).collect();
        block_lats.push((start, len, coordinate_sublattice(&basis, &keep)));
        start += len;
    }
    let outside = |v: &[i64]| {
        block_lats.iter().any(|(s, len, lat)| {
            let mut w = vec![BigInt::zero(); n];
            for i in *s..s + len {
                w[i] = BigInt::from(v[i]);
            }
            !hnf_contains(lat, &w)
        })
    };
    let (red, _) = lll(&basis);
    let Some(red) = lattice::to_i64_rows(&red) else {
        return Ok(None);
    };
    let mut best: Option<Vec<i64>> = None;
    let mut any_outside = false;
    for row in &red {
        if outside(row) {
            any_outside = true;
            if row.iter().all(|x| x.abs() <= cfg.bound) {
                let p = present(row);
                if best.as_ref().is_none_or(|b| witness_cmp(&present(b), &p).is_gt()) {
                    best = Some(row.clone());
                }
            }
        }
    }
    if !any_outside {
        return Ok(None);
    }
    let l1 = |v: &[i64]| v.iter().map(|x| x.unsigned_abs()).sum::<u64>() as f64;
    let full = (n as f64) * (cfg.bound as f64).powi(2);
    let r2 = best.as_ref().map_or(full, |b| l1(b).powi(2).min(full));
    let mut best_l1 = best.as_ref().map_or(f64::INFINITY, |b| l1(b));
    enumerate_short(&red, r2, ENUMERATION_NODE_CAP, |v| {
        if l1(v) > best_l1 || v.iter().any(|x| x.abs() > cfg.bound) {
            return None;
        }
        let p = present(v);
        if let Some(b) = &best {
            if witness_cmp(&present(b), &p).is_le() {
                return None;
            }
        }
        if !outside(v) {
            return None;
        }
        best_l1 = l1(v);
        best = Some(v.to_vec());
        Some(best_l1 * best_l1)
    });
    Ok(best)
}

fn infinite_order_eigenvalues(g: &SemisimpleElement) -> Result<Vec<AlgebraicNumber>, WeakCommError> {
    let ev = g.eigenvalues()?.to_vec();
    if !g.has_infinite_order()? {
        return Err(WeakCommError::FiniteOrder);
    }
    Ok(ev)
}

fn product_value(nums: &[AlgebraicNumber], exps: &[i64]) -> Result<AlgebraicNumber, WeakCommError> {
    let terms: Vec<(&AlgebraicNumber, i64)> = nums
        .iter()
        .zip(exps)
        .filter(|(_, e)| **e != 0)
        .map(|(x, e)| (x, *e))
        .collect();
    Ok(AlgebraicNumber::product(&terms)?)
}

/// Eigenvalues of `g` with multiplicity.
pub fn eigenvalues(g: &SemisimpleElement) -> Result<Vec<AlgebraicNumber>, WeakCommError> {
    Ok(g.eigenvalues()?.to_vec())
}

/// Weak commensurability of two infinite-order semisimple elements, up
/// to the exponent bound.
pub fn weakly_commensurable(
    g1: &SemisimpleElement,
    g2: &SemisimpleElement,
    cfg: &WeakCommConfig,
) -> Result<Verdict, WeakCommError> {
    let e1 = infinite_order_eigenvalues(g1)?;
    let e2 = infinite_order_eigenvalues(g2)?;
    let n1 = e1.len();
    let mut all = e1.clone();
    all.extend(e2);
    let flip = |v: &[i64]| {
        v.iter()
            .enumerate()
            .map(|(i, x)| if i < n1 { *x } else { -x })
            .collect::<Vec<_>>()
    };
    match mixed_relation(&all, &[n1, all.len() - n1], cfg, &flip)? {
        None => Ok(Verdict::NoUpToBound { bound: cfg.bound }),
        Some(v) => {
            let w = flip(&v);
            let a = w[..n1].to_vec();
            let b = w[n1..].to_vec();
            let common_value = product_value(&e1, &a)?;
            Ok(Verdict::Yes {
                witness: (a, b),
                common_value,
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct PairVerdict {
    pub left: usize,
    pub right: usize,
    pub verdict: Verdict,
}

/// Sample-level weak commensurability. Finite-order elements are skipped
/// and listed; pairs run in parallel and are reported in index order.
#[derive(Debug, Clone)]
pub struct SampleReport {
    pub pairs: Vec<PairVerdict>,
    pub left_finite: Vec<usize>,
    pub right_finite: Vec<usize>,
    /// For each element of the first sample: whether it has a partner.
    pub left_matched: Vec<bool>,
    pub right_matched: Vec<bool>,
    pub left_to_right: bool,
    pub right_to_left: bool,
    pub aggregate: bool,
}

pub fn weakly_commensurable_samples(
    s1: &[SemisimpleElement],
    s2: &[SemisimpleElement],
    cfg: &WeakCommConfig,
) -> Result<SampleReport, WeakCommError> {
    if s1.is_empty() || s2.is_empty() {
        return Err(WeakCommError::InvalidElement("samples must be nonempty".into()));
    }
    let finite = |s: &[SemisimpleElement]| -> Result<Vec<usize>, WeakCommError> {
        let mut out = Vec::new();
        for (i, g) in s.iter().enumerate() {
            if !g.has_infinite_order()? {
                out.push(i);
            }
        }
        Ok(out)
    };
    let left_finite = finite(s1)?;
    let right_finite = finite(s2)?;
    let jobs: Vec<(usize, usize)> = (0..s1.len())
        .filter(|i| !left_finite.contains(i))
        .flat_map(|i| {
            (0..s2.len())
                .filter(|j| !right_finite.contains(j))
                .map(move |j| (i, j))
                .collect::<Vec<_>>()
        })
        .collect();
    let pairs: Vec<PairVerdict> = jobs
        .par_iter()
        .map(|&(i, j)| {
            weakly_commensurable(&s1[i], &s2[j], cfg).map(|verdict| PairVerdict {
                left: i,
                right: j,
                verdict,
            })
        })
        .collect::<Result<_, _>>()?;
    let mut left_matched = vec![false; s1.len()];
    let mut right_matched = vec![false; s2.len()];
    for p in &pairs {
        if p.verdict.is_yes() {
            left_matched[p.left] = true;
            right_matched[p.right] = true;
        }
    }
    let left_to_right = (0..s1.len())
        .filter(|i| !left_finite.contains(i))
        .all(|i| left_matched[i]);
    let right_to_left = (0..s2.len())
        .filter(|j| !right_finite.contains(j))
        .all(|j| right_matched[j]);
    Ok(SampleReport {
        pairs,
        left_finite,
        right_finite,
        left_matched,
        right_matched,
        left_to_right,
        right_to_left,
        aggregate: left_to_right && right_to_left,
    })
}

fn split_blocks(v: &[i64], sizes: &[usize]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut s = 0;
    for &len in sizes {
        out.push(v[s..s + len].to_vec());
        s += len;
    }
    out
}

#[derive(Debug, Clone)]
pub struct IndependenceReport {
    pub independent: bool,
    /// A relation `prod_i chi_i(g_i) = 1` with some factor `!= 1`, as
    /// per-element eigenvalue exponent vectors.
    pub certificate: Option<Vec<Vec<i64>>>,
}

/// Multiplicative independence up to the exponent bound.
pub fn multiplicatively_independent(
    gs: &[SemisimpleElement],
    cfg: &WeakCommConfig,
) -> Result<IndependenceReport, WeakCommError> {
    let mut all = Vec::new();
    let mut sizes = Vec::new();
    for g in gs {
        let ev = infinite_order_eigenvalues(g)?;
        sizes.push(ev.len());
        all.extend(ev);
    }
    let id = |v: &[i64]| v.to_vec();
    let found = mixed_relation(&all, &sizes, cfg, &id)?;
    Ok(IndependenceReport {
        independent: found.is_none(),
        certificate: found.map(|v| split_blocks(&v, &sizes)),
    })
}

#[derive(Debug, Clone)]
pub struct ContainmentReport {
    pub contained: bool,
    /// Exponent vectors for the first list and for the second list.
    pub witness: Option<(Vec<Vec<i64>>, Vec<Vec<i64>>)>,
    pub common_value: Option<AlgebraicNumber>,
}

/// Whether some product of eigenvalue powers of `gs` equals a product of
/// eigenvalue powers over `s2` and differs from 1.
pub fn weakly_contained(
    gs: &[SemisimpleElement],
    s2: &[SemisimpleElement],
    cfg: &WeakCommConfig,
) -> Result<ContainmentReport, WeakCommError> {
    let mut left = Vec::new();
    let mut lsizes = Vec::new();
    for g in gs {
        let ev = infinite_order_eigenvalues(g)?;
        lsizes.push(ev.len());
        left.extend(ev);
    }
    let mut right = Vec::new();
    let mut rsizes = Vec::new();
    for g in s2 {
        let ev = g.eigenvalues()?.to_vec();
        rsizes.push(ev.len());
        right.extend(ev);
    }
    let n1 = left.len();
    let mut all = left.clone();
    all.extend(right);
    let flip = |v: &[i64]| {
        v.iter()
            .enumerate()
            .map(|(i, x)| if i < n1 { *x } else { -x })
            .collect::<Vec<_>>()
    };
    match mixed_relation(&all, &[n1, all.len() - n1], cfg, &flip)? {
        None => Ok(ContainmentReport {
            contained: false,
            witness: None,
            common_value: None,
        }),
        Some(v) => {
            let w = flip(&v);
            let common_value = product_value(&left, &w[..n1])?;
            Ok(ContainmentReport {
                contained: true,
                witness: Some((split_blocks(&w[..n1], &lsizes), split_blocks(&w[n1..], &rsizes))),
                common_value: Some(common_value),
            })
        }
    }
}

/// Trace of the adjoint action on the Lie algebra.
pub fn trace_ad(g: &SemisimpleElement) -> Result<BigRational, WeakCommError> {
    g.trace_ad()
}

/// Field generated by adjoint traces of words in a sample.
#[derive(Debug, Clone)]
pub struct TraceField {
    /// Minimal polynomial of a primitive element.
    pub minpoly: PolyQ,
    pub degree: usize,
    /// Distinct adjoint traces encountered, sorted.
    pub traces: Vec<BigRational>,
    pub words_examined: usize,
}

const TRACE_FIELD_WORD_CAP: usize = 20_000;

/// Trace field of the group generated by `sample`, from all freely reduced
/// words of length at most `word_budget` (capped at a fixed word count).
/// Rational matrices have rational adjoint traces, so the field is `Q`
/// with primitive element 0.
pub fn trace_field(sample: &[SemisimpleElement], word_budget: usize) -> Result<TraceField, WeakCommError> {
    if sample.is_empty() {
        return Err(WeakCommError::InvalidElement("sample must be nonempty".into()));
    }
    let mut letters: Vec<MatrixQ> = Vec::new();
    for g in sample {
        letters.push(g.matrix().clone());
        letters.push(g.matrix().inverse()?);
    }
    let group = sample[0].group();
    let mut traces = vec![sample[0].trace_ad()?];
    for g in &sample[1..] {
        traces.push(g.trace_ad()?);
    }
    let mut frontier: Vec<(MatrixQ, usize)> = letters.iter().cloned().zip(0..).collect();
    let mut words = 0usize;
    for _len in 1..=word_budget {
        let mut next = Vec::new();
        for (m, last) in &frontier {
            words += 1;
            traces.push(SemisimpleElement::new(m.clone(), group)?.trace_ad()?);
            if words >= TRACE_FIELD_WORD_CAP {
                break;
            }
            for (l, letter) in letters.iter().enumerate() {
                if l ^ 1 != *last {
                    next.push((m.mul(letter), l));
                }
            }
        }
        if words >= TRACE_FIELD_WORD_CAP {
            break;
        }
        frontier = next;
    }
    traces.sort();
    traces.dedup();
    Ok(TraceField {
        minpoly: PolyQ::x(),
        degree: 1,
        traces,
        words_examined: words,
    })
}

/// Convert an exponent vector to `BigInt`s.
pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Largest absolute entry, for reporting.
pub fn max_abs(v: &[BigInt]) -> i64 {
    v.iter().map(|x| x.abs().to_i64().unwrap_or(i64::MAX)).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(rows: &[&[i64]]) -> SemisimpleElement {
        SemisimpleElement::sl_from_ints(rows).unwrap()
    }

    #[test]
    fn gamma_and_its_square() {
        let g = sl(&[&[2, 1], &[1, 1]]);
        let g2 = g.pow(2).unwrap();
        let cfg = WeakCommConfig::default();
        match weakly_commensurable(&g, &g2, &cfg).unwrap() {
            Verdict::Yes { witness, common_value } => {
                assert_eq!(witness, (vec![2, 0], vec![1, 0]));
                assert_eq!(common_value.minpoly(), &PolyQ::from_ints(&[1, -7, 1]));
                assert!(common_value.to_f64().0 > 6.0);
            }
            v => panic!("{v:?}"),
        }
        assert!(weakly_commensurable(&g, &g, &cfg).unwrap().is_yes());
    }

    #[test]
    fn different_quadratic_fields() {
        let a = sl(&[&[2, 1], &[1, 1]]);
        let b = sl(&[&[2, 1], &[3, 2]]);
        let cfg = WeakCommConfig::default();
        assert_eq!(
            weakly_commensurable(&a, &b, &cfg).unwrap(),
            Verdict::NoUpToBound { bound: 20 }
        );
        let rep = weakly_commensurable_samples(&[a.clone()], &[b.clone()], &cfg).unwrap();
        assert!(!rep.aggregate);
        let ind = multiplicatively_independent(&[a.clone(), b.clone()], &cfg).unwrap();
        assert!(ind.independent);
        assert!(!weakly_contained(&[a], &[b], &cfg).unwrap().contained);
    }

    #[test]
    fn dependence_certificate() {
        let g = sl(&[&[2, 1], &[1, 1]]);
        let g2 = g.pow(2).unwrap();
        let cfg = WeakCommConfig::default();
        let ind = multiplicatively_independent(&[g.clone(), g2.clone()], &cfg).unwrap();
        assert!(!ind.independent);
        assert_eq!(ind.certificate.unwrap(), vec![vec![2, 0], vec![-1, 0]]);
        assert!(multiplicatively_independent(&[g.clone()], &cfg).unwrap().independent);
        let c = weakly_contained(&[g.clone()], &[g2.clone()], &cfg).unwrap();
        assert!(c.contained);
    }

    #[test]
    fn finite_order_rejected() {
        let r = sl(&[&[0, -1], &[1, 0]]);
        let g = sl(&[&[2, 1], &[1, 1]]);
        let cfg = WeakCommConfig::default();
        assert_eq!(weakly_commensurable(&r, &g, &cfg).unwrap_err(), WeakCommError::FiniteOrder);
        let u = sl(&[&[1, 1], &[0, 1]]);
        assert_eq!(weakly_commensurable(&u, &g, &cfg).unwrap_err(), WeakCommError::NotSemisimple);
    }

    #[test]
    fn trace_fields_are_rational() {
        let g = sl(&[&[2, 1], &[1, 1]]);
        let h = sl(&[&[1, 2], &[0, 1]]);
        let f = trace_field(&[g.clone(), h], 3).unwrap();
        assert_eq!(f.minpoly, PolyQ::x());
        assert!(f.traces.contains(&BigRational::from_integer(8.into())));
        let id = sl(&[&[1, 0], &[0, 1]]);
        assert_eq!(trace_field(&[id], 0).unwrap().degree, 1);
    }
}
