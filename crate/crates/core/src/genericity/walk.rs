//! Seeded random words in a finitely generated matrix group, each
//! classified by the genericity test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{is_generic_element, GenericityCertificate, GenericityError};
use crate::exactnum::MatrixQ;
use crate::weakcomm::element::{GroupKind, SemisimpleElement};

#[derive(Debug, Clone)]
pub struct WalkWord {
    /// Letters index the symmetric generating set: `2i` is generator `i`,
    /// `2i + 1` its inverse.
    pub letters: Vec<usize>,
    pub matrix: MatrixQ,
    pub certificate: GenericityCertificate,
}

#[derive(Debug, Clone)]
pub struct WalkSample {
    pub words: Vec<WalkWord>,
    pub generic: usize,
    pub proportion: f64,
}

fn letters(n_letters: usize, length: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(length);
    for _ in 0..length {
        let l = match out.last() {
            // never follow a letter by its inverse
            Some(&prev) if n_letters > 1 => {
                let k = rng.gen_range(0..n_letters - 1);
                if k >= (prev ^ 1) {
                    k + 1
                } else {
                    k
                }
            }
            _ => rng.gen_range(0..n_letters),
        };
        out.push(l);
    }
    out
}

/// `count` non-backtracking words of the given length over the generators
/// and their inverses. Word `w` draws its letters from the ChaCha stream
/// `w` of `seed`, so the sample does not depend on the thread count.
pub fn random_walk_sample(
    generators: &[MatrixQ],
    group: GroupKind,
    length: usize,
    count: usize,
    seed: u64,
    budget: u64,
) -> Result<WalkSample, GenericityError> {
    if generators.is_empty() {
        return Err(GenericityError::UnsupportedGroup("no generators".into()));
    }
    let mut sym = Vec::with_capacity(2 * generators.len());
    for g in generators {
        SemisimpleElement::new(g.clone(), group)?;
        sym.push(g.clone());
        sym.push(g.inverse()?);
    }
    let words = (0..count)
        .into_par_iter()
        .map(|w| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(w as u64);
            let ls = letters(sym.len(), length, &mut rng);
            let mut m = MatrixQ::identity(group.dim());
            for &l in &ls {
                m = m.mul(&sym[l]);
            }
            let el = SemisimpleElement::new(m.clone(), group)?;
            let certificate = is_generic_element(&el, budget)?;
            Ok(WalkWord {
                letters: ls,
                matrix: m,
                certificate,
            })
        })
        .collect::<Result<Vec<_>, GenericityError>>()?;
    let generic = words.iter().filter(|w| w.certificate.is_certified()).count();
    let proportion = if count == 0 { 0.0 } else { generic as f64 / count as f64 };
    Ok(WalkSample {
        words,
        generic,
        proportion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genericity::GenericityStatus;

    #[test]
    fn walks_are_reproducible() {
        let gens = [
            MatrixQ::from_ints(&[&[1, 2], &[0, 1]]),
            MatrixQ::from_ints(&[&[1, 0], &[2, 1]]),
        ];
        let a = random_walk_sample(&gens, GroupKind::SL(2), 8, 30, 42, 200).unwrap();
        let b = random_walk_sample(&gens, GroupKind::SL(2), 8, 30, 42, 200).unwrap();
        assert!((0.0..=1.0).contains(&a.proportion));
        for (x, y) in a.words.iter().zip(&b.words) {
            assert_eq!(x.letters, y.letters);
            assert_eq!(x.certificate.status, y.certificate.status);
            for w in x.letters.windows(2) {
                assert_ne!(w[1], w[0] ^ 1);
            }
        }
        // parabolic words are not regular
        for w in &a.words {
            let tr = w.matrix.trace();
            if tr == crate::exactnum::rational::rat(2) || tr == crate::exactnum::rational::rat(-2) {
                assert_ne!(w.certificate.status, GenericityStatus::Certified);
            }
        }
    }

    #[test]
    fn trivial_and_cyclic_walks() {
        let g = [MatrixQ::from_ints(&[&[2, 1], &[1, 1]])];
        let s = random_walk_sample(&g, GroupKind::SL(2), 0, 5, 1, 100).unwrap();
        assert_eq!(s.generic, 0);
        assert!(s.words.iter().all(|w| w.matrix.is_identity()));
        let s = random_walk_sample(&g, GroupKind::SL(2), 4, 10, 1, 100).unwrap();
        assert_eq!(s.generic, 10);
        assert_eq!(s.proportion, 1.0);
    }
}
