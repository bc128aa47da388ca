//! Reduced words in a free group `F = <x_1, ..., x_r>`.
//!
//! Words are stored run-length encoded as syllables `x_i^e` with `e != 0`
//! and no two adjacent syllables sharing a generator. Generator indices are
//! 1-based throughout the public API, matching the text syntax `x1 x2^-1`.

use std::fmt;

use crate::error::{Error, Result};

/// One run `x_generator ^ exponent` of a reduced word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable {
    pub generator: usize,
    pub exponent: i64,
}

/// A freely reduced word in the free group of a fixed rank.
///
/// Equality is equality of reduced forms, which solves the word problem
/// in a free group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    rank: usize,
    syllables: Vec<Syllable>,
}

fn check_rank(rank: usize) -> Result<()> {
    if rank == 0 {
        return Err(Error::InvalidRank(rank));
    }
    Ok(())
}

fn same_rank(a: &Word, b: &Word) -> Result<()> {
    if a.rank != b.rank {
        return Err(Error::RankMismatch {
            left: a.rank,
            right: b.rank,
        });
    }
    Ok(())
}

/// Push a syllable onto a reduced stack, merging and cancelling as needed.
fn push_reducing(stack: &mut Vec<Syllable>, s: Syllable) {
    if s.exponent == 0 {
        return;
    }
    match stack.last_mut() {
        Some(top) if top.generator == s.generator => {
            top.exponent += s.exponent;
            if top.exponent == 0 {
                stack.pop();
            }
        }
        _ => stack.push(s),
    }
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            syllables: Vec::new(),
        }
    }

    /// The generator `x_index`.
    pub fn generator(rank: usize, index: usize) -> Result<Self> {
        Self::reduce(rank, [(index, 1)])
    }

    /// Freely reduce an arbitrary sequence of `(generator, exponent)` pairs.
    pub fn reduce<I>(rank: usize, letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        check_rank(rank)?;
        let mut stack = Vec::new();
        for (generator, exponent) in letters {
            if generator == 0 || generator > rank {
                return Err(Error::GeneratorOutOfRange {
                    index: generator,
                    rank,
                });
            }
            push_reducing(
                &mut stack,
                Syllable {
                    generator,
                    exponent,
                },
            );
        }
        Ok(Word {
            rank,
            syllables: stack,
        })
    }

    pub(crate) fn from_reduced(rank: usize, syllables: Vec<Syllable>) -> Self {
        debug_assert!(syllables.windows(2).all(|p| p[0].generator != p[1].generator));
        debug_assert!(syllables.iter().all(|s| s.exponent != 0));
        Word { rank, syllables }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters `x_i^{±1}` in the reduced spelling.
    pub fn letter_len(&self) -> usize {
        self.syllables
            .iter()
            .map(|s| s.exponent.unsigned_abs() as usize)
            .sum()
    }

    /// Letters of the reduced word, each as `(generator, ±1)`.
    pub fn letters(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.syllables.iter().flat_map(|s| {
            let sign = s.exponent.signum();
            (0..s.exponent.unsigned_abs()).map(move |_| (s.generator, sign))
        })
    }

    pub fn inverse(&self) -> Self {
        let syllables = self
            .syllables
            .iter()
            .rev()
            .map(|s| Syllable {
                generator: s.generator,
                exponent: -s.exponent,
            })
            .collect();
        Word::from_reduced(self.rank, syllables)
    }

    /// The reduced product `self * other`.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        same_rank(self, other)?;
        Ok(self.concat_unchecked(other))
    }

    pub(crate) fn concat_unchecked(&self, other: &Word) -> Word {
        let mut stack = self.syllables.clone();
        let rest = &other.syllables;
        // cancellation only happens at the junction
        let mut i = 0;
        while i < rest.len() {
            let s = rest[i];
            match stack.last_mut() {
                Some(top) if top.generator == s.generator => {
                    top.exponent += s.exponent;
                    i += 1;
                    if top.exponent != 0 {
                        break;
                    }
                    stack.pop();
                }
                _ => break,
            }
        }
        stack.extend_from_slice(&rest[i..]);
        Word::from_reduced(self.rank, stack)
    }

    /// `x^e` for a single generator.
    pub fn power(&self, exponent: i64) -> Word {
        if exponent == 0 || self.is_identity() {
            return Word::identity(self.rank);
        }
        let base = if exponent > 0 {
            self.clone()
        } else {
            self.inverse()
        };
        let mut acc = Word::identity(self.rank);
        for _ in 0..exponent.unsigned_abs() {
            acc = acc.concat_unchecked(&base);
        }
        acc
    }

    /// Exponent sum of each generator, i.e. the image in `Z^rank`.
    pub fn abelianize(&self) -> Vec<i64> {
        let mut v = vec![0; self.rank];
        for s in &self.syllables {
            v[s.generator - 1] += s.exponent;
        }
        v
    }

    /// Parse the text syntax `x1 x2^-1 x1^3`. The empty string, `1` and `e`
    /// denote the identity.
    pub fn parse(text: &str, rank: usize) -> Result<Word> {
        let letters = parse_letters(text)?;
        Word::reduce(rank, letters)
    }

    /// Parse with the smallest even rank (at least 2) containing every
    /// generator mentioned.
    pub fn parse_with_min_rank(text: &str) -> Result<Word> {
        let letters = parse_letters(text)?;
        let max = letters.iter().map(|l| l.0).max().unwrap_or(1);
        let rank = max.max(2).div_ceil(2) * 2;
        Word::reduce(rank, letters)
    }

    /// Rewrite the word with generators renamed by `map[i - 1]`.
    pub fn relabel(&self, map: &[usize]) -> Result<Word> {
        Word::reduce(
            self.rank,
            self.syllables.iter().map(|s| (map[s.generator - 1], s.exponent)),
        )
    }
}

fn parse_letters(text: &str) -> Result<Vec<(usize, i64)>> {
    let err = |reason: &str| Error::Parse {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let mut out = Vec::new();
    for token in text.split_whitespace() {
        if token == "1" || token == "e" {
            continue;
        }
        let body = token
            .strip_prefix('x')
            .ok_or_else(|| err("letters must look like x<i> or x<i>^<e>"))?;
        let (index, exponent) = match body.split_once('^') {
            Some((i, e)) => (i, e.parse::<i64>().map_err(|_| err("bad exponent"))?),
            None => (body, 1),
        };
        let index = index
            .parse::<usize>()
            .map_err(|_| err("bad generator index"))?;
        out.push((index, exponent));
    }
    Ok(out)
}

/// The commutator `[a, b] = a b a^{-1} b^{-1}`.
pub fn commutator(a: &Word, b: &Word) -> Result<Word> {
    same_rank(a, b)?;
    Ok(a
        .concat_unchecked(b)
        .concat_unchecked(&a.inverse())
        .concat_unchecked(&b.inverse()))
}

/// The conjugate `w^x = x^{-1} w x`.
pub fn conjugate(w: &Word, x: &Word) -> Result<Word> {
    same_rank(w, x)?;
    Ok(x.inverse().concat_unchecked(w).concat_unchecked(x))
}

impl std::ops::Mul for &Word {
    type Output = Word;

    /// Panics when the ranks differ; use [`Word::concat`] to get an error.
    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs).expect("word rank mismatch")
    }
}

impl fmt::Display for Word {
    /// Identity prints as `1`; otherwise `x1 x2^-1 x1^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (k, s) in self.syllables.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if s.exponent == 1 {
                write!(f, "x{}", s.generator)?;
            } else {
                write!(f, "x{}^{}", s.generator, s.exponent)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(text: &str) -> Word {
        Word::parse(text, 4).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(Word::reduce(4, [(1, 1), (1, -1)]).unwrap().is_identity());
        assert_eq!(Word::reduce(4, [(1, 1), (2, 1)]).unwrap(), w("x1 x2"));
        let r = Word::reduce(4, [(1, 1), (2, 1), (2, -1), (1, 1)]).unwrap();
        assert_eq!(r, w("x1^2"));
        assert_eq!(r.syllables().len(), 1);
    }

    #[test]
    fn reduce_rejects_bad_index() {
        assert_eq!(
            Word::reduce(4, [(5, 1)]),
            Err(Error::GeneratorOutOfRange { index: 5, rank: 4 })
        );
        assert!(Word::reduce(4, [(0, 1)]).is_err());
    }

    #[test]
    fn commutator_examples() {
        let x1 = w("x1");
        let x2 = w("x2");
        assert!(commutator(&x1, &x1).unwrap().is_identity());
        assert_eq!(
            commutator(&x1, &x2).unwrap(),
            w("x1 x2 x1^-1 x2^-1")
        );
        assert_eq!(
            commutator(&w("x1 x2"), &x2).unwrap(),
            w("x1 x2 x1^-1 x2^-1")
        );
        let other = Word::parse("x1", 6).unwrap();
        assert!(commutator(&x1, &other).is_err());
    }

    #[test]
    fn conjugate_examples() {
        let x1 = w("x1");
        assert_eq!(conjugate(&x1, &x1).unwrap(), x1);
        assert_eq!(conjugate(&x1, &w("x2")).unwrap(), w("x2^-1 x1 x2"));
        assert!(conjugate(&Word::identity(4), &w("x3 x1")).unwrap().is_identity());
    }

    #[test]
    fn abelianize_examples() {
        assert_eq!(w("x1 x2 x1").abelianize(), vec![2, 1, 0, 0]);
        assert_eq!(
            commutator(&w("x1"), &w("x2")).unwrap().abelianize(),
            vec![0; 4]
        );
        assert_eq!(w("x1^-3").abelianize(), vec![-3, 0, 0, 0]);
    }

    #[test]
    fn text_round_trip() {
        let word = w("x1 x2^-1 x1^3");
        assert_eq!(word.to_string(), "x1 x2^-1 x1^3");
        assert_eq!(Word::parse(&word.to_string(), 4).unwrap(), word);
        assert!(Word::parse("", 4).unwrap().is_identity());
        assert_eq!(Word::identity(4).to_string(), "1");
        assert!(Word::parse("y1", 4).is_err());
        assert!(Word::parse("x1^a", 4).is_err());
        assert_eq!(Word::parse_with_min_rank("x3").unwrap().rank(), 4);
    }

    #[test]
    fn power_and_letters() {
        let x = w("x1 x2");
        assert_eq!(x.power(2), w("x1 x2 x1 x2"));
        assert_eq!(x.power(-1), x.inverse());
        assert_eq!(x.power(2).letter_len(), 4);
        let letters: Vec<_> = w("x1^2 x3^-1").letters().collect();
        assert_eq!(letters, vec![(1, 1), (1, 1), (3, -1)]);
    }

    fn raw_letters() -> impl Strategy<Value = Vec<(usize, i64)>> {
        proptest::collection::vec((1usize..=4, -2i64..=2), 0..24)
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(raw in raw_letters()) {
            let once = Word::reduce(4, raw).unwrap();
            let again = Word::reduce(4, once.syllables().iter().map(|s| (s.generator, s.exponent))).unwrap();
            prop_assert_eq!(once, again);
        }

        #[test]
        fn concat_matches_reduce_of_joined(a in raw_letters(), b in raw_letters()) {
            let wa = Word::reduce(4, a.clone()).unwrap();
            let wb = Word::reduce(4, b.clone()).unwrap();
            let joined = Word::reduce(4, a.into_iter().chain(b)).unwrap();
            prop_assert_eq!(wa.concat(&wb).unwrap(), joined);
        }

        #[test]
        fn inverse_cancels(a in raw_letters()) {
            let wa = Word::reduce(4, a).unwrap();
            prop_assert!(wa.concat(&wa.inverse()).unwrap().is_identity());
        }

        #[test]
        fn commutators_abelianize_to_zero(a in raw_letters(), b in raw_letters()) {
            let wa = Word::reduce(4, a).unwrap();
            let wb = Word::reduce(4, b).unwrap();
            prop_assert_eq!(commutator(&wa, &wb).unwrap().abelianize(), vec![0; 4]);
        }

        #[test]
        fn conjugation_preserves_abelianization(a in raw_letters(), b in raw_letters()) {
            let wa = Word::reduce(4, a).unwrap();
            let wb = Word::reduce(4, b).unwrap();
            prop_assert_eq!(conjugate(&wa, &wb).unwrap().abelianize(), wa.abelianize());
        }

        #[test]
        fn abelianize_is_a_homomorphism(a in raw_letters(), b in raw_letters()) {
            let wa = Word::reduce(4, a).unwrap();
            let wb = Word::reduce(4, b).unwrap();
            let sum: Vec<i64> = wa.abelianize().iter().zip(wb.abelianize()).map(|(x, y)| x + y).collect();
            prop_assert_eq!(wa.concat(&wb).unwrap().abelianize(), sum);
        }
    }
}
