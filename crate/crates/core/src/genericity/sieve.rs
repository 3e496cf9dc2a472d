//! Congruence sieves: one prime per nontrivial Weyl class, with a local
//! polynomial realizing that class. Any polynomial congruent to the local
//! polynomials is generic by Jordan's lemma.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{frobenius_pattern, GenericityError};
use crate::exactnum::modp::{is_irreducible, PolyFp};
use crate::exactnum::rational::primes_up_to;
use crate::exactnum::PolyQ;
use crate::rootsys::{conjugacy_classes, Family, RootSystemType, WeylClassDescriptor};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveConstraint {
    pub prime: u64,
    pub class: WeylClassDescriptor,
    /// Monic squarefree polynomial mod `prime` whose Frobenius class is
    /// `class`; for B it is the palindromic part (without `t - 1`).
    pub local: PolyFp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSieve {
    pub root_system: RootSystemType,
    pub constraints: Vec<SieveConstraint>,
}

impl CongruenceSieve {
    /// True when the Frobenius class of `f` at every sieve prime is the
    /// prescribed one.
    pub fn accepts(&self, f: &PolyQ) -> bool {
        self.constraints.iter().all(|c| {
            frobenius_pattern(f, self.root_system.family(), c.prime).is_ok_and(|k| k == c.class)
        })
    }

    /// Monic integer polynomial congruent to every local polynomial, with
    /// coefficients in the symmetric range. For B the factor `t - 1` is
    /// appended so the result has the shape of an odd orthogonal
    /// characteristic polynomial.
    pub fn lift(&self) -> PolyQ {
        let deg = self.constraints.first().map_or(0, |c| c.local.deg());
        let mut m = BigInt::one();
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for c in &self.constraints {
            let p = BigInt::from(c.prime);
            for (k, x) in coeffs.iter_mut().enumerate() {
                let r = BigInt::from(c.local.coeffs().get(k).copied().unwrap_or(0));
                *x = crt(x, &m, &r, &p);
            }
            m *= &p;
        }
        let half = &m / 2;
        for x in coeffs.iter_mut() {
            if *x > half {
                *x -= &m;
            }
        }
        let f = PolyQ::from_bigints(&coeffs);
        if self.root_system.family() == Family::B {
            &PolyQ::from_ints(&[-1, 1]) * &f
        } else {
            f
        }
    }
}

/// Solution in `0..m*p` of `x = a mod m`, `x = r mod p` for coprime moduli.
fn crt(a: &BigInt, m: &BigInt, r: &BigInt, p: &BigInt) -> BigInt {
    let g = m.extended_gcd(p);
    // m * g.x = 1 mod p
    let t = ((r - a) * &g.x).mod_floor(p);
    (a + m * t).mod_floor(&(m * p))
}

const ATTEMPTS_PER_FACTOR: usize = 400;

fn random_monic(p: u64, d: usize, rng: &mut ChaCha8Rng) -> PolyFp {
    let mut c: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).collect();
    c.push(1);
    PolyFp::new(p, c)
}

fn random_palindromic(p: u64, d2: usize, rng: &mut ChaCha8Rng) -> PolyFp {
    let mut c = vec![0u64; d2 + 1];
    c[0] = 1;
    c[d2] = 1;
    for k in 1..=d2 / 2 {
        let v = rng.gen_range(0..p);
        c[k] = v;
        c[d2 - k] = v;
    }
    PolyFp::new(p, c)
}

/// Random irreducible factor not yet used; `t` itself is excluded so the
/// product stays invertible.
fn fresh<F>(used: &mut Vec<PolyFp>, rng: &mut ChaCha8Rng, mut draw: F, accept: impl Fn(&PolyFp) -> bool) -> Option<PolyFp>
where
    F: FnMut(&mut ChaCha8Rng) -> PolyFp,
{
    for _ in 0..ATTEMPTS_PER_FACTOR {
        let g = draw(rng);
        if g.coeffs().first() == Some(&0) || used.contains(&g) || !is_irreducible(&g) || !accept(&g) {
            continue;
        }
        used.push(g.clone());
        return Some(g);
    }
    None
}

/// Local polynomial mod `p` whose Frobenius class is `class`, or `None`
/// if the random search does not find enough distinct factors.
fn realize(class: &WeylClassDescriptor, p: u64, rng: &mut ChaCha8Rng) -> Option<PolyFp> {
    let mut used = Vec::new();
    let mut acc = PolyFp::one(p);
    match class {
        WeylClassDescriptor::Partition(parts) => {
            for &d in parts {
                let g = fresh(&mut used, rng, |r| random_monic(p, d as usize, r), |_| true)?;
                acc = acc.mul(&g);
            }
        }
        WeylClassDescriptor::Signed { positive, negative } => {
            for &d in positive {
                let g = fresh(
                    &mut used,
                    rng,
                    |r| random_monic(p, d as usize, r),
                    |g| g.reciprocal() != *g,
                )?;
                let r = g.reciprocal();
                if used.contains(&r) {
                    return None;
                }
                used.push(r.clone());
                acc = acc.mul(&g).mul(&r);
            }
            for &d in negative {
                let g = fresh(&mut used, rng, |r| random_palindromic(p, 2 * d as usize, r), |_| true)?;
                acc = acc.mul(&g);
            }
        }
    }
    Some(acc)
}

/// Pair each nontrivial Weyl class with its own prime up to `budget`
/// (primes shuffled by `seed`, 2 skipped for B and C), together with a
/// local polynomial realizing the class.
pub fn build_sieve(family: Family, rank: u32, budget: u64, seed: u64) -> Result<CongruenceSieve, GenericityError> {
    if !matches!(family, Family::A | Family::B | Family::C) {
        return Err(GenericityError::UnsupportedGroup(format!(
            "sieves are built for families A, B and C, not {family}"
        )));
    }
    let rt = RootSystemType::new(family, rank)?;
    let classes: Vec<WeylClassDescriptor> = conjugacy_classes(&rt)?
        .into_iter()
        .filter(|c| !c.is_identity())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut primes: Vec<u64> = primes_up_to(budget)
        .into_iter()
        .filter(|&p| family == Family::A || p != 2)
        .collect();
    primes.shuffle(&mut rng);
    let mut constraints = Vec::with_capacity(classes.len());
    for class in classes {
        let mut found = None;
        for (i, &p) in primes.iter().enumerate() {
            if let Some(local) = realize(&class, p, &mut rng) {
                found = Some((i, p, local));
                break;
            }
        }
        let (i, prime, local) = found.ok_or(GenericityError::BudgetExhausted { budget })?;
        primes.remove(i);
        constraints.push(SieveConstraint { prime, class, local });
    }
    Ok(CongruenceSieve {
        root_system: rt,
        constraints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genericity::certify_generic_poly;

    #[test]
    fn sieve_shapes() {
        let s = build_sieve(Family::A, 2, 100, 1).unwrap();
        assert_eq!(s.constraints.len(), 2);
        assert_ne!(s.constraints[0].prime, s.constraints[1].prime);
        assert_eq!(build_sieve(Family::B, 2, 100, 1).unwrap().constraints.len(), 4);
        assert_eq!(build_sieve(Family::A, 1, 100, 1).unwrap().constraints.len(), 1);
        assert!(matches!(
            build_sieve(Family::A, 3, 5, 1),
            Err(GenericityError::BudgetExhausted { budget: 5 })
        ));
    }

    #[test]
    fn lifted_polynomials_are_certified() {
        for (fam, rank) in [(Family::A, 2), (Family::A, 3), (Family::B, 2), (Family::C, 3)] {
            let s = build_sieve(fam, rank, 200, 7).unwrap();
            let f = s.lift();
            assert!(s.accepts(&f), "{fam}{rank}");
            let budget = s.constraints.iter().map(|c| c.prime).max().unwrap();
            assert!(certify_generic_poly(&f, fam, budget).unwrap().is_certified(), "{fam}{rank}");
        }
    }
}
