use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use wcomm_core::exactnum::rational::is_prime;
use wcomm_core::exactnum::{factor_mod_p, AlgebraicNumber, PolyFp, PolyQ};

fn sqrt(d: i64) -> AlgebraicNumber {
    let mut r = AlgebraicNumber::roots_of_irreducible(&PolyQ::from_ints(&[-d, 0, 1])).unwrap();
    r.sort_by_key(|x| x.sort_key());
    r.pop().unwrap()
}

/// `a + b sqrt(d)` with small integer `a, b`.
fn quadratic(d: i64) -> impl Strategy<Value = AlgebraicNumber> {
    (-6i64..=6, -4i64..=4).prop_map(move |(a, b)| {
        let root = sqrt(d);
        let b = AlgebraicNumber::from_int(b).mul(&root).unwrap();
        AlgebraicNumber::from_int(a).add(&b).unwrap()
    })
}

fn field() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![2i64, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn factors_multiply_back(
        coeffs in prop::collection::vec(-40i64..=40, 2..8),
        p in prop::sample::select((2u64..200).filter(|&p| is_prime(p)).collect::<Vec<_>>()),
    ) {
        let f = PolyQ::from_ints(&coeffs);
        prop_assume!(f.deg() >= 1);
        // Leading coefficient divisible by p is rejected by design.
        prop_assume!(coeffs[f.deg()].rem_euclid(p as i64) != 0);
        let fac = factor_mod_p(&f, p).unwrap();
        prop_assert_eq!(fac.expand(), PolyFp::from_i64(p, &coeffs));
        for (g, _) in &fac.factors {
            prop_assert!(g.is_monic());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn products_commute_and_associate((x, y, z) in field().prop_flat_map(|d| (quadratic(d), quadratic(d), quadratic(d))), w in quadratic(2)) {
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        let left = x.mul(&y).unwrap().mul(&z).unwrap();
        let right = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        // Mixed fields as well.
        prop_assert_eq!(x.mul(&w).unwrap(), w.mul(&x).unwrap());
    }

    #[test]
    fn refinement_preserves_equality(x in quadratic(5), y in quadratic(5), bits in 8u32..80) {
        let xr = x.refine(bits).unwrap();
        prop_assert_eq!(&xr, &x);
        prop_assert_eq!(xr == y, x == y);
    }

    #[test]
    fn log_of_large_units_is_positive(k in 1i64..12) {
        // 1 + k sqrt 2 > 1.
        let two = sqrt(2);
        let u = AlgebraicNumber::from_int(1)
            .add(&AlgebraicNumber::from_int(k).mul(&two).unwrap())
            .unwrap();
        let log = u.certified_log_abs(64).unwrap();
        prop_assert!(log.is_positive());
        let f = (1.0 + k as f64 * 2f64.sqrt()).ln();
        // The interval is far narrower than f64 resolution.
        prop_assert!((log.to_f64_mid() - f).abs() < 1e-12);
    }
}

#[test]
fn golden_ratio_identity() {
    // phi^2 = phi + 1.
    let five = sqrt(5);
    let half = AlgebraicNumber::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)));
    let phi = half.add(&half.mul(&five).unwrap()).unwrap();
    let lhs = phi.pow(2).unwrap();
    let rhs = phi.add(&AlgebraicNumber::one()).unwrap();
    assert_eq!(lhs, rhs);
}
