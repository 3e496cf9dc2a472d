use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use wcomm_core::exactnum::{AlgebraicNumber, MatrixQ};
use wcomm_core::weakcomm::lattice::{hnf, hnf_contains};
use wcomm_core::weakcomm::{
    eigenvalues, relation_lattice, weakly_commensurable, RelationConfig, SemisimpleElement, Verdict, WeakCommConfig,
};

const SMALL_PRIMES: [i64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Sign bit and prime exponents of `n / d`.
fn factor(n: i64, d: i64) -> (bool, BTreeMap<i64, i64>) {
    let mut e = BTreeMap::new();
    for (x, s) in [(n.abs(), 1), (d.abs(), -1)] {
        let mut x = x;
        for p in SMALL_PRIMES {
            while x % p == 0 {
                x /= p;
                *e.entry(p).or_insert(0) += s;
            }
        }
        assert_eq!(x, 1);
    }
    ((n < 0) != (d < 0), e)
}

/// Brute-force relation test through unique factorization.
fn is_relation(xs: &[(bool, BTreeMap<i64, i64>)], a: &[i64]) -> bool {
    let mut total: BTreeMap<i64, i64> = BTreeMap::new();
    let mut sign = 0i64;
    for ((neg, e), &k) in xs.iter().zip(a) {
        if *neg {
            sign += k;
        }
        for (p, v) in e {
            *total.entry(*p).or_insert(0) += v * k;
        }
    }
    sign.rem_euclid(2) == 0 && total.values().all(|&v| v == 0)
}

fn exponent_box(len: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-bound..=bound).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (prop_oneof![-50i64..=-1, 1i64..=50], 1i64..=50)
}

/// `[[1 + k m, k], [m, 1]]`, hyperbolic when `k m > 0`.
fn hyperbolic() -> impl Strategy<Value = SemisimpleElement> {
    (1i64..=4, 1i64..=4, any::<bool>()).prop_map(|(k, m, neg)| {
        let (k, m) = if neg { (-k, -m) } else { (k, m) };
        SemisimpleElement::sl_from_ints(&[&[1 + k * m, k], &[m, 1]]).unwrap()
    })
}

fn conjugator() -> impl Strategy<Value = MatrixQ> {
    ((-5i64..=5, 1i64..=3), (-5i64..=5, 1i64..=3), (-5i64..=5, 1i64..=3), (-5i64..=5, 1i64..=3))
        .prop_map(|(a, b, c, d)| {
            MatrixQ::from_rows(vec![vec![q(a.0, a.1), q(b.0, b.1)], vec![q(c.0, c.1), q(d.0, d.1)]]).unwrap()
        })
        .prop_filter("invertible", |h| h.det() != q(0, 1))
}

fn cfg() -> WeakCommConfig {
    WeakCommConfig {
        bound: 10,
        ..WeakCommConfig::default()
    }
}

fn check_witness(g1: &SemisimpleElement, g2: &SemisimpleElement, v: &Verdict) -> Result<(), TestCaseError> {
    if let Verdict::Yes { witness, common_value } = v {
        let (e1, e2) = (eigenvalues(g1).unwrap(), eigenvalues(g2).unwrap());
        let lhs: Vec<(&AlgebraicNumber, i64)> = e1.iter().zip(witness.0.iter().copied()).collect();
        let rhs: Vec<(&AlgebraicNumber, i64)> = e2.iter().zip(witness.1.iter().copied()).collect();
        let l = AlgebraicNumber::product(&lhs).unwrap();
        let r = AlgebraicNumber::product(&rhs).unwrap();
        prop_assert_eq!(&l, &r);
        prop_assert_eq!(&l, common_value);
        prop_assert!(!l.equals_one());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn rational_lattices_match_exhaustive_search(xs in prop::collection::vec(small_rational(), 1..=3)) {
        let nums: Vec<AlgebraicNumber> = xs.iter().map(|&(n, d)| AlgebraicNumber::from_rational(q(n, d))).collect();
        let lat = relation_lattice(&nums, 10, &RelationConfig::default()).unwrap();
        let facs: Vec<_> = xs.iter().map(|&(n, d)| factor(n, d)).collect();
        for row in &lat.basis {
            let r: Vec<i64> = row.iter().map(|x| i64::try_from(x).unwrap()).collect();
            prop_assert!(is_relation(&facs, &r), "basis row {:?} is not a relation", r);
        }
        let h = hnf(&lat.basis);
        for a in exponent_box(xs.len(), 10) {
            let big: Vec<BigInt> = a.iter().map(|&k| BigInt::from(k)).collect();
            prop_assert_eq!(is_relation(&facs, &a), hnf_contains(&h, &big), "vector {:?}", a);
        }
    }

    #[test]
    fn lattice_rows_multiply_to_one(g in hyperbolic(), h in hyperbolic()) {
        let mut nums = eigenvalues(&g).unwrap();
        nums.extend(eigenvalues(&h).unwrap());
        let lat = relation_lattice(&nums, 10, &RelationConfig::default()).unwrap();
        // Each element contributes lambda * lambda^-1 = 1.
        prop_assert!(lat.rank() >= 2);
        for row in &lat.basis {
            let terms: Vec<(&AlgebraicNumber, i64)> =
                nums.iter().zip(row.iter().map(|x| i64::try_from(x).unwrap())).collect();
            prop_assert!(AlgebraicNumber::product(&terms).unwrap().equals_one());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn verdict_is_symmetric_and_verified(g in hyperbolic(), h in hyperbolic()) {
        let ab = weakly_commensurable(&g, &h, &cfg()).unwrap();
        let ba = weakly_commensurable(&h, &g, &cfg()).unwrap();
        prop_assert_eq!(ab.is_yes(), ba.is_yes());
        check_witness(&g, &h, &ab)?;
        check_witness(&h, &g, &ba)?;
    }

    #[test]
    fn verdict_is_conjugation_invariant(g in hyperbolic(), h in hyperbolic(), c in conjugator()) {
        let before = weakly_commensurable(&g, &h, &cfg()).unwrap();
        let gc = g.conjugate_by(&c).unwrap();
        let after = weakly_commensurable(&gc, &h, &cfg()).unwrap();
        prop_assert_eq!(before.is_yes(), after.is_yes());
        check_witness(&gc, &h, &after)?;
    }

    #[test]
    fn powers_are_weakly_commensurable(g in hyperbolic(), k in 2i64..=4) {
        let gk = g.pow(k).unwrap();
        let v = weakly_commensurable(&g, &gk, &cfg()).unwrap();
        prop_assert!(v.is_yes());
        check_witness(&g, &gk, &v)?;
    }
}
