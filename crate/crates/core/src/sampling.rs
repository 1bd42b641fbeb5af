//! Seeded random word generators shared by tests, scans, and the
//! acceptance suite.  Everything takes an explicit `Rng` so runs are
//! reproducible from a single seed.

use crate::artin::{is_artin_reduced, DehnOptions};
use crate::dihedral::DihedralPair;
use crate::words::{Error, GroupSpec, Word};
use rand::Rng;

/// Uniformly random freely reduced word with exactly `len` letters over
/// generators `a1..an`.  The first letter is uniform over all `2n`
/// signed letters, each later letter uniform over the `2n - 1` letters
/// that do not cancel its predecessor.
pub fn random_reduced_word<R: Rng>(rng: &mut R, n: u16, len: usize) -> Word {
    assert!(n >= 1);
    let mut letters: Vec<(u16, i64)> = Vec::with_capacity(len);
    for _ in 0..len {
        loop {
            let gen = rng.gen_range(1..=n);
            let sign: i64 = if rng.gen() { 1 } else { -1 };
            if let Some(&(pg, ps)) = letters.last() {
                if pg == gen && ps == -sign {
                    continue;
                }
            }
            letters.push((gen, sign));
            break;
        }
    }
    Word::from_letters(letters)
}

/// Random freely reduced word with exactly `len` letters over the two
/// generators `i` and `j`.
pub fn random_pair_word<R: Rng>(rng: &mut R, i: u16, j: u16, len: usize) -> Word {
    assert_ne!(i, j);
    let mut letters: Vec<(u16, i64)> = Vec::with_capacity(len);
    for _ in 0..len {
        loop {
            let gen = if rng.gen() { i } else { j };
            let sign: i64 = if rng.gen() { 1 } else { -1 };
            if let Some(&(pg, ps)) = letters.last() {
                if pg == gen && ps == -sign {
                    continue;
                }
            }
            letters.push((gen, sign));
            break;
        }
    }
    Word::from_letters(letters)
}

/// Product of `count` conjugated relators `c r^{±1} c^{-1}`, with each
/// relator drawn from a uniformly random finite pair of the spec and
/// each conjugator a random reduced word of length up to `conj_len`.
/// The result is trivial in the group by construction.
pub fn relator_conjugate_product<R: Rng>(
    rng: &mut R,
    spec: &GroupSpec,
    count: usize,
    conj_len: usize,
) -> Result<Word, Error> {
    let pairs = spec.finite_pairs();
    if pairs.is_empty() {
        return Err(Error::InfinitePair(0, 0));
    }
    let mut acc = Word::empty();
    for _ in 0..count {
        let (i, j, m) = pairs[rng.gen_range(0..pairs.len())];
        let pair = DihedralPair::new(i, j, m)?;
        let r = if rng.gen() {
            pair.relator()
        } else {
            pair.relator().invert()
        };
        let clen = rng.gen_range(0..=conj_len);
        let c = random_reduced_word(rng, spec.n(), clen);
        acc = acc.concat(&r.conjugate_by(&c));
    }
    Ok(acc)
}

/// Rejection-samples a nonempty freely reduced word of length `len`
/// that passes the reducedness check.
pub fn random_artin_reduced<R: Rng>(
    rng: &mut R,
    spec: &GroupSpec,
    len: usize,
    opts: &DehnOptions,
) -> Result<Word, Error> {
    assert!(len >= 1);
    loop {
        let w = random_reduced_word(rng, spec.n(), len);
        if is_artin_reduced(spec, &w, opts)? {
            return Ok(w);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn reduced_words_have_exact_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for len in 0..40 {
            let w = random_reduced_word(&mut rng, 3, len);
            assert_eq!(w.letter_len(), len as u64, "{}", w.token_string());
            for s in w.syllables() {
                assert!((1..=3).contains(&s.gen));
            }
        }
    }

    #[test]
    fn pair_words_stay_in_their_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let w = random_pair_word(&mut rng, 2, 3, 9);
            assert_eq!(w.letter_len(), 9);
            assert!(w.syllables().iter().all(|s| s.gen == 2 || s.gen == 3));
        }
    }

    #[test]
    fn same_seed_same_words() {
        let mut r1 = ChaCha8Rng::seed_from_u64(99);
        let mut r2 = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            assert_eq!(
                random_reduced_word(&mut r1, 4, 11),
                random_reduced_word(&mut r2, 4, 11)
            );
        }
    }

    #[test]
    fn relator_products_are_trivial_in_the_pair_group() {
        // A two-generator spec lets the normal form certify triviality
        // independently of any reduction machinery.
        let spec = GroupSpec::uniform(2, 7);
        let pair = DihedralPair::new(1, 2, 7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..60 {
            let w = relator_conjugate_product(&mut rng, &spec, 3, 3).unwrap();
            assert!(pair.is_trivial_checked(&w).unwrap(), "{}", w.token_string());
        }
    }

    #[test]
    fn artin_reduced_samples_verify() {
        let spec = GroupSpec::uniform(3, 7);
        let opts = DehnOptions::default();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..40 {
            let w = random_artin_reduced(&mut rng, &spec, 10, &opts).unwrap();
            assert_eq!(w.letter_len(), 10);
            assert!(is_artin_reduced(&spec, &w, &opts).unwrap());
        }
    }

    #[test]
    fn free_spec_has_no_relators_to_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        assert!(relator_conjugate_product(&mut rng, &GroupSpec::free(2), 2, 2).is_err());
    }
}
