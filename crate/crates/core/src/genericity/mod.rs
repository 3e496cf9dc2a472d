//! Generic elements and tori: Frobenius cycle types of characteristic
//! polynomials, Weyl-group certificates, congruence sieves, random walks,
//! finite-field generation tests and the long-root dichotomy.

pub mod dichotomy;
pub mod finite_group;
pub mod resolvent;
pub mod sieve;
pub mod walk;

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::exactnum::factor::squarefree_decomposition;
use crate::exactnum::modp::{factor_mod_p, FactorizationModP, PolyFp};
use crate::exactnum::rational::{is_prime, primes_up_to, rat};
use crate::exactnum::{ExactError, PolyQ};
use crate::rootsys::{conjugacy_classes, Family, RootSysError, RootSystemType, WeylClassDescriptor};
use crate::weakcomm::element::SemisimpleElement;
use crate::weakcomm::WeakCommError;

pub use dichotomy::{dichotomy_check, long_root_subgroup, DichotomyConclusion, DichotomyReport};
pub use finite_group::{generates_mod_p, GenerationReport};
pub use sieve::{build_sieve, CongruenceSieve, SieveConstraint};
pub use walk::{random_walk_sample, WalkSample, WalkWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenericityError {
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is not palindromic")]
    NotPalindromic,
    #[error("prime {0} is ramified: the reduction is not squarefree or loses degree")]
    RamifiedPrime(u64),
    #[error("bad prime {0}")]
    BadPrime(u64),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("prime budget {budget} exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("element is not certified generic")]
    NotGeneric,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    WeakComm(#[from] WeakCommError),
    #[error(transparent)]
    RootSys(#[from] RootSysError),
}

/// Outcome of a genericity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenericityStatus {
    Certified,
    Undetermined,
    NotRegular,
    FiniteOrder,
}

/// Frobenius evidence for one polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericityCertificate {
    pub status: GenericityStatus,
    pub root_system: RootSystemType,
    /// Each witnessed class with the smallest prime realizing it; the
    /// identity class is free and carries `None`.
    pub witnessed: BTreeMap<WeylClassDescriptor, Option<u64>>,
    /// Number of conjugacy classes of the Weyl group.
    pub class_count: usize,
    /// Unramified primes whose pattern was computed.
    pub primes_examined: usize,
    /// Set for family D, whose very even class pairs are not separated.
    pub class_collapse: bool,
    /// Human-readable reason when not certified.
    pub note: Option<String>,
}

impl GenericityCertificate {
    fn bare(status: GenericityStatus, rt: RootSystemType, note: &str) -> Self {
        Self {
            status,
            root_system: rt,
            witnessed: BTreeMap::new(),
            class_count: conjugacy_classes(&rt).map(|c| c.len()).unwrap_or(0),
            primes_examined: 0,
            class_collapse: rt.family() == Family::D,
            note: Some(note.to_string()),
        }
    }

    pub fn is_certified(&self) -> bool {
        self.status == GenericityStatus::Certified
    }

    /// Distinct primes that witnessed a class, ascending.
    pub fn primes_used(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.witnessed.values().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn signed_family(f: Family) -> bool {
    matches!(f, Family::B | Family::C | Family::D)
}

/// Polynomial on which the Weyl group acts: the input for family A, the
/// palindromic part for B, C and D (for B a factor `t - 1` is removed).
pub(crate) fn torus_polynomial(f: &PolyQ, family: Family) -> Result<PolyQ, GenericityError> {
    if f.is_zero() || f.deg() == 0 {
        return Err(GenericityError::DegreeMismatch("constant polynomial".into()));
    }
    match family {
        Family::A => Ok(f.clone()),
        Family::B if f.deg() % 2 == 1 => {
            if !f.eval(&rat(1)).is_zero() {
                return Err(GenericityError::DegreeMismatch(
                    "odd-degree B-type polynomial must vanish at 1".into(),
                ));
            }
            let (q, _) = f.div_rem(&PolyQ::from_ints(&[-1, 1]));
            if !q.is_palindromic() {
                return Err(GenericityError::NotPalindromic);
            }
            Ok(q)
        }
        Family::B | Family::C | Family::D => {
            if f.deg() % 2 == 1 {
                return Err(GenericityError::DegreeMismatch(format!(
                    "family {family} needs even degree"
                )));
            }
            if !f.is_palindromic() {
                return Err(GenericityError::NotPalindromic);
            }
            Ok(f.clone())
        }
        other => Err(GenericityError::RootSys(RootSysError::UnsupportedFamily(other))),
    }
}

/// Root system whose Weyl group acts on the roots of `f`.
pub fn root_system_for(f: &PolyQ, family: Family) -> Result<RootSystemType, GenericityError> {
    let t = torus_polynomial(f, family)?;
    let rank = match family {
        Family::A => t.deg() as u32 - 1,
        _ => t.deg() as u32 / 2,
    };
    Ok(RootSystemType::new(family, rank)?)
}

/// Signed cycle type from a squarefree factorization of a palindromic
/// reduction. `t - 1` is skipped, `t + 1` is a negative 1-cycle, a
/// self-reciprocal factor of degree `2d` a negative `d`-cycle, and a pair
/// of mutually reciprocal factors of degree `d` a positive `d`-cycle.
fn signed_type(fac: &FactorizationModP) -> Option<WeylClassDescriptor> {
    let p = fac.p;
    let one_minus = PolyFp::new(p, vec![p - 1, 1]);
    let one_plus = PolyFp::new(p, vec![1, 1]);
    let mut used = vec![false; fac.factors.len()];
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for i in 0..fac.factors.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let g = &fac.factors[i].0;
        if *g == one_minus {
            continue;
        }
        if *g == one_plus {
            neg.push(1);
            continue;
        }
        let r = g.reciprocal();
        if r == *g {
            if g.deg() % 2 == 1 {
                return None;
            }
            neg.push(g.deg() as u32 / 2);
            continue;
        }
        let j = (0..fac.factors.len()).find(|&j| !used[j] && fac.factors[j].0 == r)?;
        used[j] = true;
        pos.push(g.deg() as u32);
    }
    Some(WeylClassDescriptor::signed(pos, neg))
}

/// Conjugacy class of Frobenius at `p` acting on the roots of `charpoly`.
pub fn frobenius_pattern(charpoly: &PolyQ, family: Family, p: u64) -> Result<WeylClassDescriptor, GenericityError> {
    if !is_prime(p) || (signed_family(family) && p == 2) {
        return Err(GenericityError::BadPrime(p));
    }
    let t = torus_polynomial(charpoly, family)?;
    let fac = match factor_mod_p(&t, p) {
        Ok(f) => f,
        Err(ExactError::BadPrime(_)) => return Err(GenericityError::RamifiedPrime(p)),
        Err(e) => return Err(e.into()),
    };
    if !fac.is_squarefree() {
        return Err(GenericityError::RamifiedPrime(p));
    }
    if family == Family::A {
        return Ok(WeylClassDescriptor::partition(fac.degree_pattern()));
    }
    signed_type(&fac).ok_or(GenericityError::NotPalindromic)
}

fn odd_negative(c: &WeylClassDescriptor) -> bool {
    matches!(c, WeylClassDescriptor::Signed { negative, .. } if negative.len() % 2 == 1)
}

const PRIME_CHUNK: usize = 32;

/// Frobenius sampling over primes up to `budget`. Certified once every
/// conjugacy class of the Weyl group has been witnessed; otherwise
/// Undetermined.
pub fn certify_generic_poly(
    charpoly: &PolyQ,
    family: Family,
    budget: u64,
) -> Result<GenericityCertificate, GenericityError> {
    let rt = root_system_for(charpoly, family)?;
    if !charpoly.is_squarefree() {
        return Err(GenericityError::NotSquarefree);
    }
    let classes = conjugacy_classes(&rt)?;
    let mut cert = GenericityCertificate {
        status: GenericityStatus::Undetermined,
        root_system: rt,
        witnessed: BTreeMap::new(),
        class_count: classes.len(),
        primes_examined: 0,
        class_collapse: family == Family::D,
        note: None,
    };
    if let Some(id) = classes.iter().find(|c| c.is_identity()) {
        cert.witnessed.insert(id.clone(), None);
    }
    let primes: Vec<u64> = primes_up_to(budget)
        .into_iter()
        .filter(|&p| !(signed_family(family) && p == 2))
        .collect();
    let mut outside = None;
    'scan: for chunk in primes.chunks(PRIME_CHUNK) {
        if cert.witnessed.len() == classes.len() {
            break;
        }
        let pats: Vec<(u64, Result<WeylClassDescriptor, GenericityError>)> = chunk
            .par_iter()
            .map(|&p| (p, frobenius_pattern(charpoly, family, p)))
            .collect();
        for (p, r) in pats {
            let c = match r {
                Ok(c) => c,
                Err(GenericityError::RamifiedPrime(_)) => continue,
                Err(e) => return Err(e),
            };
            cert.primes_examined += 1;
            if family == Family::D && odd_negative(&c) {
                outside = Some(p);
                break 'scan;
            }
            cert.witnessed.entry(c).or_insert(Some(p));
            if cert.witnessed.len() == classes.len() {
                break 'scan;
            }
        }
    }
    if let Some(p) = outside {
        cert.note = Some(format!(
            "Frobenius at {p} has an odd number of negative cycles, so the Galois group is not inside W(D{})",
            rt.rank()
        ));
    } else if cert.witnessed.len() == classes.len() {
        debug_assert!(classes.iter().all(|c| cert.witnessed.contains_key(c)));
        cert.status = GenericityStatus::Certified;
    } else {
        cert.note = Some(format!(
            "{} of {} classes witnessed by primes up to {budget}",
            cert.witnessed.len(),
            classes.len()
        ));
    }
    Ok(cert)
}

/// Regular semisimple: distinct eigenvalues, except that in family D an
/// eigenvalue 1 or -1 may occur as one pair.
pub fn is_regular(g: &SemisimpleElement) -> Result<bool, GenericityError> {
    let rt = group_root_system(g)?;
    if !g.is_semisimple() {
        return Ok(false);
    }
    for (h, m) in squarefree_decomposition(g.charpoly()) {
        if m == 1 {
            continue;
        }
        let paired = rt.family() == Family::D && m == 2 && {
            let lin = [PolyQ::from_ints(&[-1, 1]), PolyQ::from_ints(&[1, 1])];
            h.deg() <= 2 && (lin.contains(&h.monic()) || h.monic() == &lin[0] * &lin[1])
        };
        if !paired {
            return Ok(false);
        }
    }
    Ok(true)
}

fn group_root_system(g: &SemisimpleElement) -> Result<RootSystemType, GenericityError> {
    g.group()
        .root_system()
        .ok_or_else(|| GenericityError::UnsupportedGroup(g.group().to_string()))
}

/// Regularity, infinite order, then Frobenius certification of the
/// characteristic polynomial.
pub fn is_generic_element(g: &SemisimpleElement, budget: u64) -> Result<GenericityCertificate, GenericityError> {
    let rt = group_root_system(g)?;
    if !is_regular(g)? {
        return Ok(GenericityCertificate::bare(
            GenericityStatus::NotRegular,
            rt,
            "repeated eigenvalues",
        ));
    }
    if !g.has_infinite_order()? {
        return Ok(GenericityCertificate::bare(
            GenericityStatus::FiniteOrder,
            rt,
            "all eigenvalues are roots of unity",
        ));
    }
    if !g.charpoly().is_squarefree() {
        // a D-type pair of eigenvalues 1 or -1 is fixed by Galois
        return Ok(GenericityCertificate::bare(
            GenericityStatus::Undetermined,
            rt,
            "an eigenvalue pair at 1 or -1 is fixed by Galois",
        ));
    }
    certify_generic_poly(g.charpoly(), rt.family(), budget)
}

/// For generic elements of infinite order, the associated maximal tori
/// agree exactly when the elements commute.
pub fn same_associated_torus(
    g1: &SemisimpleElement,
    g2: &SemisimpleElement,
    budget: u64,
) -> Result<bool, GenericityError> {
    for g in [g1, g2] {
        if !is_generic_element(g, budget)?.is_certified() {
            return Err(GenericityError::NotGeneric);
        }
    }
    if g1.group() != g2.group() {
        return Err(GenericityError::UnsupportedGroup("elements of different groups".into()));
    }
    Ok(g1.matrix().commutes_with(g2.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::MatrixQ;
    use crate::weakcomm::element::GroupKind;

    fn part(v: &[u32]) -> WeylClassDescriptor {
        WeylClassDescriptor::partition(v.to_vec())
    }

    #[test]
    fn patterns_of_cubic() {
        let f = PolyQ::from_ints(&[-1, -1, 0, 1]);
        assert_eq!(frobenius_pattern(&f, Family::A, 2).unwrap(), part(&[3]));
        assert_eq!(frobenius_pattern(&f, Family::A, 5).unwrap(), part(&[2, 1]));
        // discriminant -23
        assert_eq!(frobenius_pattern(&f, Family::A, 23), Err(GenericityError::RamifiedPrime(23)));
    }

    #[test]
    fn signed_patterns() {
        // (t^2 - 3t + 1)(t^2 + 1); 5 is a square mod 11 but not mod 7, -1 is
        // a square mod neither
        let f = &PolyQ::from_ints(&[1, -3, 1]) * &PolyQ::from_ints(&[1, 0, 1]);
        let c7 = frobenius_pattern(&f, Family::C, 7).unwrap();
        assert_eq!(c7, WeylClassDescriptor::signed(vec![], vec![1, 1]));
        let c = frobenius_pattern(&f, Family::C, 11).unwrap();
        assert_eq!(c, WeylClassDescriptor::signed(vec![1], vec![1]));
        assert_eq!(frobenius_pattern(&f, Family::C, 5), Err(GenericityError::RamifiedPrime(5)));
        assert_eq!(frobenius_pattern(&f, Family::C, 2), Err(GenericityError::BadPrime(2)));
        let b = &PolyQ::from_ints(&[-1, 1]) * &f;
        assert_eq!(frobenius_pattern(&b, Family::B, 11).unwrap(), c);
        assert_eq!(
            frobenius_pattern(&PolyQ::from_ints(&[1, 2, 3]), Family::C, 5),
            Err(GenericityError::NotPalindromic)
        );
    }

    #[test]
    fn certification_examples() {
        let f = PolyQ::from_ints(&[-1, -1, 0, 1]);
        let c = certify_generic_poly(&f, Family::A, 100).unwrap();
        assert!(c.is_certified());
        assert_eq!(c.witnessed[&part(&[3])], Some(2));
        assert_eq!(c.witnessed[&part(&[2, 1])], Some(5));
        assert_eq!(c.witnessed[&part(&[1, 1, 1])], None);
        let cyc = PolyQ::from_ints(&[-1, -3, 0, 1]);
        let c = certify_generic_poly(&cyc, Family::A, 2000).unwrap();
        assert_eq!(c.status, GenericityStatus::Undetermined);
        assert!(!c.witnessed.contains_key(&part(&[2, 1])));
        let q = PolyQ::from_ints(&[1, -3, 1]);
        assert!(certify_generic_poly(&q, Family::A, 10).unwrap().is_certified());
        assert_eq!(
            certify_generic_poly(&PolyQ::from_ints(&[1, -2, 1]), Family::A, 10),
            Err(GenericityError::NotSquarefree)
        );
    }

    #[test]
    fn element_statuses() {
        let g = SemisimpleElement::sl_from_ints(&[&[2, 1], &[1, 1]]).unwrap();
        assert!(is_generic_element(&g, 100).unwrap().is_certified());
        let r = SemisimpleElement::sl_from_ints(&[&[0, -1], &[1, 0]]).unwrap();
        assert_eq!(is_generic_element(&r, 100).unwrap().status, GenericityStatus::FiniteOrder);
        let id = SemisimpleElement::new(MatrixQ::identity(3), GroupKind::SL(3)).unwrap();
        assert_eq!(is_generic_element(&id, 100).unwrap().status, GenericityStatus::NotRegular);
        let u = SemisimpleElement::sl_from_ints(&[&[1, 1], &[0, 1]]).unwrap();
        assert_eq!(is_generic_element(&u, 100).unwrap().status, GenericityStatus::NotRegular);
    }

    #[test]
    fn tori_of_commuting_elements() {
        let g = SemisimpleElement::sl_from_ints(&[&[2, 1], &[1, 1]]).unwrap();
        let g3 = g.pow(3).unwrap();
        let s = SemisimpleElement::sl_from_ints(&[&[2, 1], &[3, 2]]).unwrap();
        assert!(same_associated_torus(&g, &g3, 100).unwrap());
        assert!(same_associated_torus(&g3, &g, 100).unwrap());
        assert!(!same_associated_torus(&g, &s, 100).unwrap());
        let h = MatrixQ::from_ints(&[&[1, 1], &[0, 1]]);
        let c = g.conjugate_by(&h).unwrap();
        assert!(!same_associated_torus(&g, &c, 100).unwrap());
        let u = SemisimpleElement::sl_from_ints(&[&[1, 1], &[0, 1]]).unwrap();
        assert_eq!(same_associated_torus(&g, &u, 100), Err(GenericityError::NotGeneric));
    }
}
