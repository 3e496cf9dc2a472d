use std::collections::BTreeSet;

use proptest::prelude::*;

use wcomm_core::exactnum::{MatrixQ, PolyQ};
use wcomm_core::genericity::{
    certify_generic_poly, dichotomy_check, frobenius_pattern, is_generic_element, same_associated_torus,
    DichotomyConclusion,
};
use wcomm_core::rootsys::{conjugacy_classes, Family, WeylClassDescriptor};
use wcomm_core::weakcomm::{GroupKind, SemisimpleElement};

const PRIMES: [u64; 12] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn parts_total(c: &WeylClassDescriptor) -> u32 {
    match c {
        WeylClassDescriptor::Partition(p) => p.iter().sum(),
        WeylClassDescriptor::Signed { positive, negative } => positive.iter().chain(negative).sum(),
    }
}

/// `t^4 + a t^3 + b t^2 + a t + 1`.
fn palindromic_quartic(a: i64, b: i64) -> PolyQ {
    PolyQ::from_ints(&[1, a, b, a, 1])
}

/// Companion matrix of `t^3 - a t^2 + b t - 1`, an element of `SL_3`.
fn sl3_companion(a: i64, b: i64) -> SemisimpleElement {
    SemisimpleElement::sl_from_ints(&[&[0, 0, 1], &[1, 0, -b], &[0, 1, a]]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn cubic_patterns_have_degree_three(a in -9i64..=9, b in -9i64..=9, c in prop_oneof![-9i64..=-1, 1i64..=9]) {
        let f = PolyQ::from_ints(&[c, b, a, 1]);
        for p in PRIMES {
            if let Ok(pat) = frobenius_pattern(&f, Family::A, p) {
                prop_assert!(matches!(pat, WeylClassDescriptor::Partition(_)), "expected a partition");
                prop_assert_eq!(parts_total(&pat), 3);
            }
        }
    }

    #[test]
    fn palindromic_patterns_have_degree_rank(a in -9i64..=9, b in -9i64..=9) {
        let f = palindromic_quartic(a, b);
        for p in PRIMES {
            if let Ok(pat) = frobenius_pattern(&f, Family::C, p) {
                prop_assert!(matches!(pat, WeylClassDescriptor::Signed { .. }), "expected a signed class");
                prop_assert_eq!(parts_total(&pat), 2);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn certificates_cover_every_class(a in -6i64..=6, b in -6i64..=6, c in prop_oneof![-5i64..=-1, 1i64..=5], quartic in any::<bool>()) {
        let (f, family) = if quartic {
            (palindromic_quartic(a, b), Family::C)
        } else {
            (PolyQ::from_ints(&[c, b, a, 1]), Family::A)
        };
        prop_assume!(f.is_squarefree());
        let Ok(cert) = certify_generic_poly(&f, family, 500) else { return Ok(()) };
        prop_assert_eq!(cert.class_count, conjugacy_classes(&cert.root_system).unwrap().len());
        if cert.is_certified() {
            let all: BTreeSet<_> = conjugacy_classes(&cert.root_system).unwrap().into_iter().collect();
            let seen: BTreeSet<_> = cert.witnessed.keys().cloned().collect();
            prop_assert_eq!(seen, all);
            for (class, p) in &cert.witnessed {
                if let Some(p) = p {
                    prop_assert_eq!(&frobenius_pattern(&f, family, *p).unwrap(), class);
                }
            }
        } else {
            prop_assert!(cert.note.is_some());
        }
    }

    #[test]
    fn associated_torus_is_symmetric_and_contains_powers(a in -6i64..=6, b in -6i64..=6, c in -6i64..=6, d in -6i64..=6, k in prop_oneof![-3i64..=-1, 1i64..=3]) {
        let g = sl3_companion(a, b);
        let h = sl3_companion(c, d);
        let gen = |x: &SemisimpleElement| is_generic_element(x, 400).map(|c| c.is_certified()).unwrap_or(false);
        prop_assume!(gen(&g) && gen(&h));
        prop_assert_eq!(
            same_associated_torus(&g, &h, 400).unwrap(),
            same_associated_torus(&h, &g, 400).unwrap()
        );
        let gk = g.pow(k).unwrap();
        prop_assume!(gen(&gk));
        prop_assert!(same_associated_torus(&g, &gk, 400).unwrap());
    }
}

#[test]
fn cubic_witness_density() {
    // t^3 - t - 1 has Galois group S3; every class shows up early.
    let cert = certify_generic_poly(&PolyQ::from_ints(&[-1, -1, 0, 1]), Family::A, 1000).unwrap();
    assert!(cert.is_certified());
    assert_eq!(cert.witnessed.len(), 3);
}

/// Symmetric 3x3 integer matrix from its upper triangle.
fn sym(u: [i64; 6]) -> [[i64; 3]; 3] {
    [[u[0], u[1], u[2]], [u[1], u[3], u[4]], [u[2], u[4], u[5]]]
}

/// `[[I, S], [0, I]]` (upper) or `[[I, 0], [S, I]]` (lower) in `Sp_6`.
fn unipotent(s: [[i64; 3]; 3], upper: bool) -> MatrixQ {
    let mut rows = vec![vec![0i64; 6]; 6];
    for i in 0..6 {
        rows[i][i] = 1;
    }
    for i in 0..3 {
        for j in 0..3 {
            if upper {
                rows[i][3 + j] = s[i][j];
            } else {
                rows[3 + i][j] = s[i][j];
            }
        }
    }
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    MatrixQ::from_ints(&refs)
}

#[test]
fn sp6_dichotomy_names_long_root_subgroup() {
    let candidates = [
        ([1, 0, 0, 2, 0, 3], [1, 1, 0, 1, 1, 1]),
        ([2, 1, 0, 1, 1, 3], [1, 0, 1, 2, 0, 1]),
        ([1, 1, 1, 2, 1, 3], [3, 1, 0, 1, 0, 2]),
        ([1, 2, 0, 1, 1, 1], [2, 0, 1, 1, 1, 1]),
    ];
    let x = unipotent(sym([1, 0, 0, 0, 0, 0]), true).mul(&unipotent(sym([0, 0, 0, 1, 0, 0]), false));
    let mut checked = 0;
    for (u, l) in candidates {
        let m = unipotent(sym(u), true).mul(&unipotent(sym(l), false));
        let g = SemisimpleElement::new(m, GroupKind::Sp(6)).unwrap();
        let certified = is_generic_element(&g, 2000).map(|c| c.is_certified()).unwrap_or(false);
        if !certified || g.matrix().commutes_with(&x) {
            continue;
        }
        let report = dichotomy_check(&g, &x, None, 2000).unwrap();
        assert_eq!(report.root_system.to_string(), "C3");
        assert_eq!(
            report.conclusion,
            DichotomyConclusion::DenseOrLongRootSubgroup {
                long_root_type: "(A1)^3".into()
            }
        );
        assert!(report.corroboration.is_none());
        checked += 1;
    }
    assert!(checked > 0, "no certified generic Sp6 element among the candidates");
}
