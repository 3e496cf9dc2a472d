//! Subgroups generated by a generic element and a second element outside
//! its torus: Zariski dense when all roots have the same length, otherwise
//! dense or contained in the subgroup generated by the torus and the long
//! root subgroups.

use super::{generates_mod_p, is_generic_element, GenerationReport, GenericityCertificate, GenericityError};
use crate::exactnum::MatrixQ;
use crate::rootsys::{Family, RootSystemType};
use crate::weakcomm::element::{GroupKind, SemisimpleElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DichotomyConclusion {
    /// All roots have the same length: the pair generates a Zariski dense
    /// subgroup.
    Dense,
    /// Either dense, or inside the group generated by the torus and the
    /// long root subgroups, of the named type. Not decided.
    DenseOrLongRootSubgroup { long_root_type: String },
}

#[derive(Debug, Clone)]
pub struct DichotomyReport {
    pub root_system: RootSystemType,
    pub conclusion: DichotomyConclusion,
    pub certificate: GenericityCertificate,
    /// Surjectivity mod p, when the group is `SL_2` or `SL_3` and a prime
    /// was supplied.
    pub corroboration: Option<GenerationReport>,
}

/// Type of the semisimple subgroup generated by the long root subgroups,
/// for families with two root lengths.
pub fn long_root_subgroup(rt: &RootSystemType) -> Option<String> {
    let n = rt.rank();
    match rt.family() {
        Family::C => Some(format!("(A1)^{n}")),
        Family::B => Some(format!("D{n}")),
        Family::F4 => Some("D4".into()),
        Family::G2 => Some("A2".into()),
        _ => None,
    }
}

fn infinite_order(g: &SemisimpleElement) -> Result<bool, GenericityError> {
    Ok(!g.is_semisimple() || g.has_infinite_order()?)
}

/// Check the hypotheses (g generic of infinite order, x of infinite order
/// and not commuting with g) and report the dichotomy for the group of g.
pub fn dichotomy_check(
    g: &SemisimpleElement,
    x: &MatrixQ,
    prime: Option<u64>,
    budget: u64,
) -> Result<DichotomyReport, GenericityError> {
    let group = g.group();
    let rt = group
        .root_system()
        .ok_or_else(|| GenericityError::UnsupportedGroup(group.to_string()))?;
    let xe = SemisimpleElement::new(x.clone(), group)?;
    let certificate = is_generic_element(g, budget)?;
    if !certificate.is_certified() {
        return Err(GenericityError::HypothesisViolated(format!(
            "g is not certified generic (status {:?})",
            certificate.status
        )));
    }
    if !infinite_order(&xe)? {
        return Err(GenericityError::HypothesisViolated("x has finite order".into()));
    }
    if g.matrix().commutes_with(x) {
        return Err(GenericityError::HypothesisViolated(
            "x commutes with g, so x lies in the torus of g".into(),
        ));
    }
    let conclusion = match long_root_subgroup(&rt) {
        None => DichotomyConclusion::Dense,
        Some(t) => DichotomyConclusion::DenseOrLongRootSubgroup { long_root_type: t },
    };
    let corroboration = match (prime, group) {
        (Some(p), GroupKind::SL(2 | 3)) if g.matrix().is_integral() && x.is_integral() => {
            Some(generates_mod_p(&[g.matrix().clone(), x.clone()], p)?)
        }
        _ => None,
    };
    Ok(DichotomyReport {
        root_system: rt,
        conclusion,
        certificate,
        corroboration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_pair_is_dense() {
        let g = SemisimpleElement::sl_from_ints(&[&[2, 1], &[1, 1]]).unwrap();
        let x = MatrixQ::from_ints(&[&[1, 1], &[0, 1]]);
        let r = dichotomy_check(&g, &x, Some(5), 100).unwrap();
        assert_eq!(r.conclusion, DichotomyConclusion::Dense);
        let c = r.corroboration.unwrap();
        assert!(c.generates);
        assert_eq!(c.closure_order, 120);
    }

    #[test]
    fn commuting_pair_rejected() {
        let g = SemisimpleElement::sl_from_ints(&[&[2, 1], &[1, 1]]).unwrap();
        let g2 = g.pow(2).unwrap();
        assert!(matches!(
            dichotomy_check(&g, g2.matrix(), Some(5), 100),
            Err(GenericityError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn long_root_types() {
        let t = |f, n| RootSystemType::new(f, n).unwrap();
        assert_eq!(long_root_subgroup(&t(Family::C, 3)).unwrap(), "(A1)^3");
        assert_eq!(long_root_subgroup(&t(Family::B, 4)).unwrap(), "D4");
        assert_eq!(long_root_subgroup(&RootSystemType::exceptional(Family::F4).unwrap()).unwrap(), "D4");
        assert_eq!(long_root_subgroup(&RootSystemType::exceptional(Family::G2).unwrap()).unwrap(), "A2");
        assert!(long_root_subgroup(&t(Family::D, 4)).is_none());
    }
}
