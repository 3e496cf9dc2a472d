//! Root systems and Weyl groups of the classical families A-D, with the
//! exceptional families carried as static metadata.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSysError {
    #[error("invalid root system type: {0}")]
    InvalidType(String),
    #[error("operation not available for family {0}")]
    UnsupportedFamily(Family),
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("type A vectors must have coordinate sum zero")]
    NonZeroTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl Family {
    pub fn is_classical(self) -> bool {
        matches!(self, Family::A | Family::B | Family::C | Family::D)
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(self, Family::A | Family::D | Family::E6 | Family::E7 | Family::E8)
    }

    fn fixed_rank(self) -> Option<u32> {
        match self {
            Family::E6 => Some(6),
            Family::E7 => Some(7),
            Family::E8 => Some(8),
            Family::F4 => Some(4),
            Family::G2 => Some(2),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E6 => "E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
            Family::F4 => "F4",
            Family::G2 => "G2",
        };
        write!(f, "{s}")
    }
}

impl FromStr for Family {
    type Err = RootSysError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "E6" => Family::E6,
            "E7" => Family::E7,
            "E8" => Family::E8,
            "F4" => Family::F4,
            "G2" => Family::G2,
            other => return Err(RootSysError::InvalidType(other.to_string())),
        })
    }
}

/// A Killing-Cartan type. For family A the rank is `n - 1` for `SL_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSystemType {
    family: Family,
    rank: u32,
}

impl RootSystemType {
    pub fn new(family: Family, rank: u32) -> Result<Self, RootSysError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            _ => family.fixed_rank() == Some(rank),
        };
        if !ok {
            return Err(RootSysError::InvalidType(format!("{family}{rank}")));
        }
        Ok(Self { family, rank })
    }

    /// Exceptional type with its fixed rank.
    pub fn exceptional(family: Family) -> Result<Self, RootSysError> {
        let rank = family
            .fixed_rank()
            .ok_or_else(|| RootSysError::InvalidType(family.to_string()))?;
        Self::new(family, rank)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Length of coordinate vectors in the standard realization.
    pub fn ambient_dim(&self) -> usize {
        match self.family {
            Family::A => self.rank as usize + 1,
            _ => self.rank as usize,
        }
    }

    /// Every type accepted by [`RootSystemType::new`] with classical rank
    /// up to `max_rank`, plus the five exceptional types.
    pub fn all_up_to(max_rank: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for (fam, min) in [(Family::A, 1), (Family::B, 2), (Family::C, 2), (Family::D, 3)] {
            for r in min..=max_rank {
                out.push(Self { family: fam, rank: r });
            }
        }
        for fam in [Family::E6, Family::E7, Family::E8, Family::F4, Family::G2] {
            out.push(Self::exceptional(fam).unwrap());
        }
        out
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.is_classical() {
            write!(f, "{}{}", self.family, self.rank)
        } else {
            write!(f, "{}", self.family)
        }
    }
}

impl FromStr for RootSystemType {
    type Err = RootSysError;
    /// Parses labels such as `A2`, `B3`, `E6`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_uppercase();
        if let Ok(fam) = t.parse::<Family>() {
            if !fam.is_classical() {
                return Self::exceptional(fam);
            }
        }
        let (head, tail) = t.split_at(t.len().min(1));
        let fam: Family = head.parse()?;
        let rank: u32 = tail
            .parse()
            .map_err(|_| RootSysError::InvalidType(s.to_string()))?;
        Self::new(fam, rank)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LengthClass {
    Long,
    Short,
    SimplyLaced,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootVector {
    pub coords: Vec<i64>,
    pub length_class: LengthClass,
}

impl RootVector {
    pub fn norm2(&self) -> i64 {
        self.coords.iter().map(|c| c * c).sum()
    }
}

/// Conjugacy class of a Weyl group by (signed) cycle type. Parts are
/// sorted in decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeylClassDescriptor {
    /// Family A: cycle type of a permutation.
    Partition(Vec<u32>),
    /// Families B, C, D: cycle lengths of positive and negative cycles.
    Signed { positive: Vec<u32>, negative: Vec<u32> },
}

impl WeylClassDescriptor {
    pub fn partition(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        WeylClassDescriptor::Partition(parts)
    }

    pub fn signed(mut positive: Vec<u32>, mut negative: Vec<u32>) -> Self {
        positive.sort_unstable_by(|a, b| b.cmp(a));
        negative.sort_unstable_by(|a, b| b.cmp(a));
        WeylClassDescriptor::Signed { positive, negative }
    }

    /// Number of letters permuted.
    pub fn degree(&self) -> u32 {
        match self {
            WeylClassDescriptor::Partition(p) => p.iter().sum(),
            WeylClassDescriptor::Signed { positive, negative } => {
                positive.iter().sum::<u32>() + negative.iter().sum::<u32>()
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            WeylClassDescriptor::Partition(p) => p.iter().all(|&x| x == 1),
            WeylClassDescriptor::Signed { positive, negative } => {
                negative.is_empty() && positive.iter().all(|&x| x == 1)
            }
        }
    }
}

impl fmt::Display for WeylClassDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u32]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            WeylClassDescriptor::Partition(p) => write!(f, "[{}]", list(p)),
            WeylClassDescriptor::Signed { positive, negative } => {
                write!(f, "([{}],[{}])", list(positive), list(negative))
            }
        }
    }
}

/// Full root set in the standard realization, sorted lexicographically.
pub fn roots(t: &RootSystemType) -> Result<Vec<RootVector>, RootSysError> {
    let n = t.ambient_dim();
    let unit = |i: usize, c: i64| {
        let mut v = vec![0i64; n];
        v[i] = c;
        v
    };
    let mut out: Vec<RootVector> = Vec::new();
    let mut push = |coords: Vec<i64>, lc: LengthClass| out.push(RootVector { coords, length_class: lc });
    match t.family {
        Family::A => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        let mut v = unit(i, 1);
                        v[j] = -1;
                        push(v, LengthClass::SimplyLaced);
                    }
                }
            }
        }
        Family::B | Family::C | Family::D => {
            let (pair_class, single) = match t.family {
                Family::B => (LengthClass::Long, Some((1, LengthClass::Short))),
                Family::C => (LengthClass::Short, Some((2, LengthClass::Long))),
                _ => (LengthClass::SimplyLaced, None),
            };
            for i in 0..n {
                for j in i + 1..n {
                    for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                        let mut v = unit(i, si);
                        v[j] = sj;
                        push(v, pair_class);
                    }
                }
                if let Some((c, lc)) = single {
                    push(unit(i, c), lc);
                    push(unit(i, -c), lc);
                }
            }
        }
        fam => return Err(RootSysError::UnsupportedFamily(fam)),
    }
    out.sort_by(|a, b| a.coords.cmp(&b.coords));
    Ok(out)
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Order of the Weyl group.
pub fn weyl_order(t: &RootSystemType) -> BigInt {
    let n = t.rank;
    match t.family {
        Family::A => factorial(n + 1),
        Family::B | Family::C => (BigInt::one() << n as usize) * factorial(n),
        Family::D => (BigInt::one() << (n - 1) as usize) * factorial(n),
        Family::E6 => BigInt::from(51_840u64),
        Family::E7 => BigInt::from(2_903_040u64),
        Family::E8 => BigInt::from(696_729_600u64),
        Family::F4 => BigInt::from(1_152u64),
        Family::G2 => BigInt::from(12u64),
    }
}

/// Whether the map `alpha -> -alpha` is an element of the Weyl group.
pub fn minus_one_in_weyl(t: &RootSystemType) -> bool {
    match t.family {
        Family::A => t.rank == 1,
        Family::B | Family::C => true,
        Family::D => t.rank % 2 == 0,
        Family::E6 => false,
        Family::E7 | Family::E8 | Family::F4 | Family::G2 => true,
    }
}

/// All partitions of `n` with parts in decreasing order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Conjugacy classes of the Weyl group, sorted, identity included. For
/// family D the two classes sharing a very even signed cycle type are
/// reported once.
pub fn conjugacy_classes(t: &RootSystemType) -> Result<Vec<WeylClassDescriptor>, RootSysError> {
    let mut out = match t.family {
        Family::A => partitions(t.rank + 1)
            .into_iter()
            .map(WeylClassDescriptor::partition)
            .collect(),
        Family::B | Family::C | Family::D => {
            let n = t.rank;
            let mut v = Vec::new();
            for k in 0..=n {
                for pos in partitions(k) {
                    for neg in partitions(n - k) {
                        if t.family == Family::D && neg.len() % 2 == 1 {
                            continue;
                        }
                        v.push(WeylClassDescriptor::signed(pos.clone(), neg));
                    }
                }
            }
            v
        }
        fam => return Err(RootSysError::UnsupportedFamily(fam)),
    };
    out.sort();
    Ok(out)
}

/// `sum over roots of <alpha, x>^2`.
pub fn quadratic_sum(t: &RootSystemType, x: &[BigRational]) -> Result<BigRational, RootSysError> {
    let n = t.ambient_dim();
    if !t.family.is_classical() {
        return Err(RootSysError::UnsupportedFamily(t.family));
    }
    if x.len() != n {
        return Err(RootSysError::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if t.family == Family::A && !x.iter().fold(BigRational::zero(), |a, b| a + b).is_zero() {
        return Err(RootSysError::NonZeroTrace);
    }
    let mut acc = BigRational::zero();
    for r in roots(t)? {
        let mut dot = BigRational::zero();
        for (c, xi) in r.coords.iter().zip(x) {
            if *c != 0 {
                dot += xi * BigRational::from_integer(BigInt::from(*c));
            }
        }
        acc += &dot * &dot;
    }
    Ok(acc)
}

/// The constant `c` with `quadratic_sum(t, x) = c |x|^2`.
pub fn casimir_constant(t: &RootSystemType) -> Result<BigRational, RootSysError> {
    let n = t.rank as i64;
    let c = match t.family {
        Family::A => 2 * (n + 1),
        Family::B => 4 * n - 2,
        Family::C => 4 * n + 4,
        Family::D => 4 * (n - 1),
        fam => return Err(RootSysError::UnsupportedFamily(fam)),
    };
    Ok(BigRational::from_integer(BigInt::from(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    fn ty(s: &str) -> RootSystemType {
        s.parse().unwrap()
    }

    #[test]
    fn root_counts() {
        assert_eq!(roots(&ty("A1")).unwrap().len(), 2);
        let b3 = roots(&ty("B3")).unwrap();
        assert_eq!(b3.len(), 18);
        assert_eq!(b3.iter().filter(|r| r.length_class == LengthClass::Short).count(), 6);
        let c3 = roots(&ty("C3")).unwrap();
        assert_eq!(c3.iter().filter(|r| r.length_class == LengthClass::Long).count(), 6);
        assert_eq!(roots(&ty("D4")).unwrap().len(), 24);
        assert!(matches!(roots(&ty("E6")), Err(RootSysError::UnsupportedFamily(Family::E6))));
        for t in RootSystemType::all_up_to(5).into_iter().filter(|t| t.family().is_classical()) {
            for r in roots(&t).unwrap() {
                let ok = match (t.family(), r.length_class) {
                    (Family::B, LengthClass::Short) | (Family::C, LengthClass::Short) => {
                        r.norm2() == if t.family() == Family::B { 1 } else { 2 }
                    }
                    (Family::B, LengthClass::Long) => r.norm2() == 2,
                    (Family::C, LengthClass::Long) => r.norm2() == 4,
                    (_, LengthClass::SimplyLaced) => r.norm2() == 2,
                    _ => false,
                };
                assert!(ok, "{t} {:?}", r);
            }
        }
    }

    #[test]
    fn orders_and_minus_one() {
        assert_eq!(weyl_order(&ty("A2")), BigInt::from(6));
        assert_eq!(weyl_order(&ty("B3")), weyl_order(&ty("C3")));
        assert_eq!(weyl_order(&ty("E6")), BigInt::from(51840));
        assert!(minus_one_in_weyl(&ty("A1")));
        assert!(!minus_one_in_weyl(&ty("A2")));
        assert!(!minus_one_in_weyl(&ty("D5")));
        assert!(!minus_one_in_weyl(&ty("E6")));
        assert!(minus_one_in_weyl(&ty("B3")));
        assert!(minus_one_in_weyl(&ty("D4")));
    }

    #[test]
    fn class_lists() {
        let a2 = conjugacy_classes(&ty("A2")).unwrap();
        assert_eq!(
            a2,
            vec![
                WeylClassDescriptor::partition(vec![1, 1, 1]),
                WeylClassDescriptor::partition(vec![2, 1]),
                WeylClassDescriptor::partition(vec![3]),
            ]
        );
        assert_eq!(conjugacy_classes(&ty("B2")).unwrap().len(), 5);
        assert_eq!(conjugacy_classes(&ty("A4")).unwrap().len(), 7);
        assert_eq!(conjugacy_classes(&ty("B3")).unwrap().len(), 10);
    }

    #[test]
    fn quadratic_sums() {
        let x = vec![rat(1), rat(0), rat(0)];
        assert_eq!(quadratic_sum(&ty("B3"), &x).unwrap(), rat(10));
        assert_eq!(quadratic_sum(&ty("C3"), &x).unwrap(), rat(16));
        assert_eq!(casimir_constant(&ty("A1")).unwrap(), rat(4));
        assert_eq!(casimir_constant(&ty("D4")).unwrap(), rat(12));
        assert_eq!(
            quadratic_sum(&ty("A2"), &[rat(1), rat(0), rat(0)]),
            Err(RootSysError::NonZeroTrace)
        );
        assert!(matches!(
            quadratic_sum(&ty("B3"), &[rat(1)]),
            Err(RootSysError::DimensionMismatch { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn parsing() {
        assert_eq!(ty("b3").family(), Family::B);
        assert_eq!(ty("E8").rank(), 8);
        assert!("B1".parse::<RootSystemType>().is_err());
        assert!("D2".parse::<RootSystemType>().is_err());
        assert!("Q3".parse::<RootSystemType>().is_err());
    }
}
