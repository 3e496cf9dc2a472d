use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use wcomm_core::rootsys::{casimir_constant, quadratic_sum, weyl_order, Family, RootSystemType};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Textbook value of the constant `c` with `sum <alpha, x>^2 = c |x|^2`.
fn closed_form_casimir(t: &RootSystemType) -> i64 {
    let n = t.rank() as i64;
    match t.family() {
        Family::A => 2 * (n + 1),
        Family::B => 4 * n - 2,
        Family::C => 4 * n + 4,
        Family::D => 4 * (n - 1),
        _ => unreachable!(),
    }
}

fn classical() -> impl Strategy<Value = RootSystemType> {
    prop_oneof![
        (1u32..=7).prop_map(|n| RootSystemType::new(Family::A, n).unwrap()),
        (2u32..=8).prop_map(|n| RootSystemType::new(Family::B, n).unwrap()),
        (2u32..=8).prop_map(|n| RootSystemType::new(Family::C, n).unwrap()),
        (3u32..=8).prop_map(|n| RootSystemType::new(Family::D, n).unwrap()),
    ]
}

fn vector_for(t: RootSystemType) -> impl Strategy<Value = (RootSystemType, Vec<BigRational>)> {
    let dim = t.ambient_dim();
    prop::collection::vec((-30i64..=30, 1i64..=9), dim).prop_map(move |raw| {
        let mut x: Vec<BigRational> = raw.into_iter().map(|(n, d)| q(n, d)).collect();
        if t.family() == Family::A {
            // Project to the trace-zero hyperplane.
            let s: BigRational = x[..dim - 1].iter().fold(BigRational::zero(), |a, b| a + b);
            x[dim - 1] = -s;
        }
        (t, x)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn quadratic_sum_is_casimir_times_norm((t, x) in classical().prop_flat_map(vector_for)) {
        let norm2 = x.iter().fold(BigRational::zero(), |a, b| a + b * b);
        let c = casimir_constant(&t).unwrap();
        prop_assert_eq!(&c, &q(closed_form_casimir(&t), 1));
        prop_assert_eq!(quadratic_sum(&t, &x).unwrap(), c * norm2);
    }
}

#[test]
fn weyl_orders_match_closed_forms() {
    for n in 1..=8u32 {
        let a = RootSystemType::new(Family::A, n).unwrap();
        assert_eq!(weyl_order(&a), factorial(n + 1));
    }
    for n in 2..=8u32 {
        let b = weyl_order(&RootSystemType::new(Family::B, n).unwrap());
        let c = weyl_order(&RootSystemType::new(Family::C, n).unwrap());
        assert_eq!(b, c);
        assert_eq!(b, (BigInt::from(1) << n) * factorial(n));
    }
    for n in 3..=8u32 {
        let d = RootSystemType::new(Family::D, n).unwrap();
        assert_eq!(weyl_order(&d), (BigInt::from(1) << (n - 1)) * factorial(n));
    }
}

#[test]
fn only_b_and_c_share_weyl_orders_at_equal_rank() {
    for n in 3..=8u32 {
        let a = weyl_order(&RootSystemType::new(Family::A, n).unwrap());
        let b = weyl_order(&RootSystemType::new(Family::B, n).unwrap());
        let d = weyl_order(&RootSystemType::new(Family::D, n).unwrap());
        assert_ne!(a, b, "A{n} vs B{n}");
        // D3 is A3 under another name.
        if n >= 4 {
            assert_ne!(a, d, "A{n} vs D{n}");
        }
        assert_ne!(b, d, "B{n} vs D{n}");
    }
}

#[test]
fn rank_constraints() {
    assert!(RootSystemType::new(Family::A, 0).is_err());
    assert!(RootSystemType::new(Family::B, 1).is_err());
    assert!(RootSystemType::new(Family::C, 1).is_err());
    assert!(RootSystemType::new(Family::D, 2).is_err());
    assert!("E6".parse::<RootSystemType>().is_ok());
}
