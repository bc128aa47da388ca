//! The recursive commutator tuple families `P_n`, the good matrices built
//! from their Fox derivatives, and the guided search for a special tuple.
//!
//! `P_0` is the single tuple `(x_1, ..., x_2g)`. `P_1` has one tuple per
//! pivot `p`: `([x_p, x_j] : j ≠ p)`. A tuple `(w_1, ..., w_{2g-1})` of
//! `P_k` has children in `P_{k+1}` obtained by choosing, independently
//! for each slot `i`, either `z_i = [w_i, w_i^{x_j}]` with `j ≠ i` or
//! `z_i = [w_i, w_k]` with `k ≠ i`, giving `(4g-3)^{2g-1}` children.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fox::{fox, p_factor, q_factor, q_residual, DerivedSeriesOracle};
use crate::matrix::laurent_determinant;
use crate::ring::{GroupHom, Laurent, QuotientImage};
use crate::words::{commutator, conjugate, Word};

/// How one element of a child tuple is built from its parent tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Choice {
    /// `z_i = [w_i, w_i^{x_generator}]`
    SelfConjugate { generator: usize },
    /// `z_i = [w_i, w_partner]`
    Cross { partner: usize },
}

/// Where a tuple sits in the recursion: the `P_1` pivot and one choice
/// vector per later level.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pedigree {
    pub pivot: Option<usize>,
    pub choices: Vec<Vec<Choice>>,
}

impl Pedigree {
    pub fn level(&self) -> usize {
        match self.pivot {
            None => 0,
            Some(_) => 1 + self.choices.len(),
        }
    }

    /// Recursion depth of one slot's element, i.e. its commutator depth.
    pub fn depth(&self) -> usize {
        self.level()
    }
}

/// One tuple of `P_n` together with its pedigree and enumeration index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyTuple {
    pub index: BigUint,
    pub words: Vec<Word>,
    pub pedigree: Pedigree,
}

/// The family `P_n` for the free group of rank `2g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TupleFamily {
    genus: usize,
    level: usize,
}

/// The choice list of a slot, in enumeration order: self-conjugations by
/// `x_j` (`j ≠ slot`) first, then commutators with other slots.
fn slot_choices(genus: usize, slot: usize) -> Vec<Choice> {
    let rank = 2 * genus;
    let mut out: Vec<Choice> = (1..=rank)
        .filter(|&j| j != slot)
        .map(|generator| Choice::SelfConjugate { generator })
        .collect();
    out.extend(
        (1..rank)
            .filter(|&k| k != slot)
            .map(|partner| Choice::Cross { partner }),
    );
    out
}

fn apply_choice(parent: &[Word], slot: usize, choice: Choice) -> Result<Word> {
    let w = &parent[slot - 1];
    match choice {
        Choice::SelfConjugate { generator } => {
            let x = Word::generator(w.rank(), generator)?;
            commutator(w, &conjugate(w, &x)?)
        }
        Choice::Cross { partner } => commutator(w, &parent[partner - 1]),
    }
}

fn base_tuple(rank: usize, pivot: usize) -> Result<Vec<Word>> {
    let x = Word::generator(rank, pivot)?;
    (1..=rank)
        .filter(|&j| j != pivot)
        .map(|j| commutator(&x, &Word::generator(rank, j)?))
        .collect()
}

impl TupleFamily {
    pub fn new(genus: usize, level: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidArgument("genus must be at least 1".into()));
        }
        Ok(TupleFamily { genus, level })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn rank(&self) -> usize {
        2 * self.genus
    }

    /// Elements per tuple: `2g` at level 0, `2g - 1` above.
    pub fn tuple_size(&self) -> usize {
        if self.level == 0 {
            self.rank()
        } else {
            self.rank() - 1
        }
    }

    /// Children of each tuple at the next level: `(4g - 3)^(2g - 1)`.
    pub fn children_per_parent(&self) -> BigUint {
        BigUint::from(4 * self.genus - 3).pow((2 * self.genus - 1) as u32)
    }

    /// `|P_n|`: 1, then `2g`, then `2g (4g-3)^((2g-1)(n-1))`.
    pub fn count(&self) -> BigUint {
        match self.level {
            0 => BigUint::one(),
            n => BigUint::from(self.rank()) * self.children_per_parent().pow((n - 1) as u32),
        }
    }

    /// Mixed-radix digits of an index: the pivot digit, then one digit per
    /// slot per level, most significant first.
    fn digits(&self, index: &BigUint) -> Result<Vec<usize>> {
        if *index >= self.count() {
            return Err(Error::InvalidArgument(format!(
                "index {index} out of range for a family of {} tuples",
                self.count()
            )));
        }
        if self.level == 0 {
            return Ok(Vec::new());
        }
        let radix = BigUint::from(4 * self.genus - 3);
        let slots = (2 * self.genus - 1) * (self.level - 1);
        let mut rest = index.clone();
        let mut digits = vec![0; slots + 1];
        for d in digits[1..].iter_mut().rev() {
            let (q, r) = rest.div_rem(&radix);
            *d = r.to_usize().expect("small digit");
            rest = q;
        }
        digits[0] = rest.to_usize().expect("pivot digit");
        Ok(digits)
    }

    fn pedigree_of(&self, digits: &[usize]) -> Pedigree {
        if self.level == 0 {
            return Pedigree {
                pivot: None,
                choices: Vec::new(),
            };
        }
        let width = 2 * self.genus - 1;
        let choices = digits[1..]
            .chunks(width)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| slot_choices(self.genus, i + 1)[d])
                    .collect()
            })
            .collect();
        Pedigree {
            pivot: Some(digits[0] + 1),
            choices,
        }
    }

    /// Index of a pedigree in enumeration order.
    pub fn index_of(&self, pedigree: &Pedigree) -> Result<BigUint> {
        if pedigree.level() != self.level {
            return Err(Error::InvalidArgument(format!(
                "pedigree of level {} in a family of level {}",
                pedigree.level(),
                self.level
            )));
        }
        let Some(pivot) = pedigree.pivot else {
            return Ok(BigUint::zero());
        };
        if pivot == 0 || pivot > self.rank() {
            return Err(Error::GeneratorOutOfRange {
                index: pivot,
                rank: self.rank(),
            });
        }
        let radix = BigUint::from(4 * self.genus - 3);
        let mut index = BigUint::from(pivot - 1);
        for level in &pedigree.choices {
            if level.len() != 2 * self.genus - 1 {
                return Err(Error::InvalidArgument("choice vector has the wrong length".into()));
            }
            for (i, c) in level.iter().enumerate() {
                let d = slot_choices(self.genus, i + 1)
                    .iter()
                    .position(|x| x == c)
                    .ok_or_else(|| {
                        Error::InvalidArgument(format!("choice {c:?} is not allowed in slot {}", i + 1))
                    })?;
                index = index * &radix + BigUint::from(d);
            }
        }
        Ok(index)
    }

    /// The tuple with the given pedigree.
    pub fn tuple_for(&self, pedigree: &Pedigree) -> Result<Vec<Word>> {
        self.index_of(pedigree)?;
        let rank = self.rank();
        let Some(pivot) = pedigree.pivot else {
            return (1..=rank).map(|i| Word::generator(rank, i)).collect();
        };
        let mut current = base_tuple(rank, pivot)?;
        for level in &pedigree.choices {
            current = level
                .iter()
                .enumerate()
                .map(|(i, &c)| apply_choice(&current, i + 1, c))
                .collect::<Result<_>>()?;
        }
        Ok(current)
    }

    pub fn tuple_at(&self, index: &BigUint) -> Result<FamilyTuple> {
        let pedigree = self.pedigree_of(&self.digits(index)?);
        Ok(FamilyTuple {
            index: index.clone(),
            words: self.tuple_for(&pedigree)?,
            pedigree,
        })
    }

    /// Lazy enumeration of the whole family in index order.
    pub fn iter(&self) -> TupleCursor {
        self.range(BigUint::zero(), self.count())
    }

    /// Lazy enumeration of indices `start..end`; disjoint ranges can be
    /// handed to independent workers.
    pub fn range(&self, start: BigUint, end: BigUint) -> TupleCursor {
        let end = end.min(self.count());
        TupleCursor {
            family: *self,
            next: start,
            end,
            digits: None,
            levels: Vec::new(),
        }
    }
}

/// Iterator over a range of `P_n`, caching each level's tuple so that
/// consecutive indices only rebuild the levels whose choices changed.
#[derive(Clone, Debug)]
pub struct TupleCursor {
    family: TupleFamily,
    next: BigUint,
    end: BigUint,
    digits: Option<Vec<usize>>,
    /// `levels[0]` is the `P_1` tuple, `levels[l]` the `P_{l+1}` tuple.
    levels: Vec<Vec<Word>>,
}

impl TupleCursor {
    fn build(&mut self, digits: &[usize]) -> Result<Vec<Word>> {
        let f = self.family;
        let rank = f.rank();
        if f.level == 0 {
            return (1..=rank).map(|i| Word::generator(rank, i)).collect();
        }
        let width = 2 * f.genus - 1;
        // first level whose digits differ from the cached state
        let first_dirty = match &self.digits {
            Some(old) if old[0] == digits[0] => (0..f.level - 1)
                .find(|&l| old[1 + l * width..1 + (l + 1) * width] != digits[1 + l * width..1 + (l + 1) * width])
                .map_or(f.level, |l| l + 1),
            _ => 0,
        };
        self.levels.truncate(first_dirty);
        if self.levels.is_empty() {
            self.levels.push(base_tuple(rank, digits[0] + 1)?);
        }
        for l in self.levels.len()..f.level {
            let parent = &self.levels[l - 1];
            let chunk = &digits[1 + (l - 1) * width..1 + l * width];
            let next = chunk
                .iter()
                .enumerate()
                .map(|(i, &d)| apply_choice(parent, i + 1, slot_choices(f.genus, i + 1)[d]))
                .collect::<Result<Vec<_>>>()?;
            self.levels.push(next);
        }
        self.digits = Some(digits.to_vec());
        Ok(self.levels[f.level - 1].clone())
    }
}

impl Iterator for TupleCursor {
    type Item = FamilyTuple;

    fn next(&mut self) -> Option<FamilyTuple> {
        if self.next >= self.end {
            return None;
        }
        let index = self.next.clone();
        self.next += 1u8;
        let digits = self.family.digits(&index).ok()?;
        let words = self.build(&digits).expect("generators in range");
        Some(FamilyTuple {
            index,
            words,
            pedigree: self.family.pedigree_of(&digits),
        })
    }
}

/// The matrix whose column `i` is `(rπ_k ∂_j w_i)` over the chosen
/// coordinates `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodMatrix {
    pub coordinates: Vec<usize>,
    /// `entries[a][i] = rπ_k ∂_{coordinates[a]} w_i`
    pub entries: Vec<Vec<QuotientImage>>,
}

impl GoodMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    /// The entries as Laurent polynomials, when the target is abelian.
    pub fn laurent(&self) -> Result<Vec<Vec<Laurent>>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| match e {
                        QuotientImage::Abelian(l) => Ok(l.clone()),
                        QuotientImage::Solvable(s) => Err(Error::NonAbelianTarget(format!(
                            "entry lives in {}",
                            s.base()
                        ))),
                    })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for GoodMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, row) in self.entries.iter().enumerate() {
            write!(f, "d{}:", self.coordinates[a])?;
            for e in row {
                write!(f, " [{e}]")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `rπ_k ∂_j w_i` for the first `tuple.len()` coordinates.
pub fn good_matrix(tuple: &[Word], r: &GroupHom, k: usize) -> Result<GoodMatrix> {
    let coords: Vec<usize> = (1..=tuple.len()).collect();
    good_matrix_on(tuple, r, k, &coords)
}

/// `rπ_k ∂_j w_i` for the listed coordinates `j`.
pub fn good_matrix_on(tuple: &[Word], r: &GroupHom, k: usize, coordinates: &[usize]) -> Result<GoodMatrix> {
    let entries = coordinates
        .iter()
        .map(|&j| {
            tuple
                .iter()
                .map(|w| r.project(&fox(w, j)?, k))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GoodMatrix {
        coordinates: coordinates.to_vec(),
        entries,
    })
}

/// Right linear independence of the columns over a commutative Laurent
/// ring: some maximal minor is nonzero.
pub fn is_good(m: &GoodMatrix) -> Result<bool> {
    let l = m.laurent()?;
    let (rows, cols) = (m.rows(), m.cols());
    if cols == 0 {
        return Ok(true);
    }
    if rows < cols {
        return Ok(false);
    }
    let dim = l[0][0].base();
    let mut pick: Vec<usize> = (0..cols).collect();
    loop {
        let minor: Vec<Vec<Laurent>> = pick.iter().map(|&a| l[a].clone()).collect();
        if !laurent_determinant(&minor, dim)?.is_zero() {
            return Ok(true);
        }
        // next combination of row indices
        let mut i = cols;
        loop {
            if i == 0 {
                return Ok(false);
            }
            i -= 1;
            if pick[i] < rows - cols + i {
                break;
            }
        }
        pick[i] += 1;
        for t in i + 1..cols {
            pick[t] = pick[t - 1] + 1;
        }
    }
}

/// Decide goodness of a tuple at level `k`; only abelian images are
/// decided.
pub fn tuple_is_good(tuple: &[Word], r: &GroupHom, k: usize) -> Result<bool> {
    is_good(&good_matrix(tuple, r, k)?)
}

/// Which half of the inductive argument built a slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    /// `rπ_{k+1}(w_i) ≠ e`: `z_i = [w_i, w_i^x]`, right factor `p_i`.
    Conjugate,
    /// `rπ_{k+1}(w_i) = e`: `z_i = [w_i, w_anchor]`, right factor `q_i`.
    Anchor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlotCertificate {
    pub slot: usize,
    pub case: Case,
    /// `rπ_{k+1}` of the right factor.
    pub factor: String,
    pub factor_nonzero: bool,
    /// The Fox factorisation identity holds in `Z[F]` on every coordinate.
    pub factorization_holds: bool,
    /// For anchor slots: the second coefficient dies under `rπ_{k+1}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_vanishes: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCertificate {
    /// The level `k + 1` of the tuple built here.
    pub level: usize,
    /// Slot with `rπ_{k+1}(w_anchor) ≠ e`.
    pub anchor: usize,
    pub slots: Vec<SlotCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "good")]
pub enum Verdict {
    /// Independence decided by a maximal minor over the Laurent ring.
    Exact(bool),
    /// Over a solvable quotient: the base case is good and every right
    /// factor is certified nonzero, which is what the induction uses.
    ByFactorization(bool),
}

impl Verdict {
    pub fn is_good(&self) -> bool {
        match self {
            Verdict::Exact(b) | Verdict::ByFactorization(b) => *b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialCertificate {
    /// Generator order used by the argument: position `i` holds the
    /// original index of the `i`-th basis element; the pivot comes last.
    pub ordering: Vec<usize>,
    pub pivot: usize,
    /// `rπ_1(x_pivot)`, nontrivial.
    pub pivot_image: String,
    pub coordinates: Vec<usize>,
    pub levels: Vec<LevelCertificate>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialTuple {
    pub genus: usize,
    pub level: usize,
    /// The tuple, in the original generators.
    pub words: Vec<Word>,
    /// Pedigree in the reordered basis, where the pivot is `x_{2g}`.
    pub pedigree: Pedigree,
    pub certificate: SpecialCertificate,
}

impl SpecialTuple {
    /// The words rewritten in the reordered basis; they form the tuple of
    /// `P_n` with [`SpecialTuple::pedigree`].
    pub fn reordered_words(&self) -> Result<Vec<Word>> {
        let ordering = &self.certificate.ordering;
        let mut map = vec![0; ordering.len()];
        for (pos, &orig) in ordering.iter().enumerate() {
            map[orig - 1] = pos + 1;
        }
        self.words.iter().map(|w| w.relabel(&map)).collect()
    }
}

/// Build a special tuple in `P_n` for `r`, following the inductive proof:
/// pick a pivot generator with nontrivial abelian image, start from the
/// pivot's `P_1` tuple, and at each level conjugate-commute the slots that
/// survive in `G_{k+1}` and commute the others with a surviving anchor.
pub fn find_special_tuple(r: &GroupHom, n: usize, oracle: &mut DerivedSeriesOracle) -> Result<SpecialTuple> {
    let rank = r.source_rank();
    if rank == 0 || !rank.is_multiple_of(2) {
        return Err(Error::InvalidRank(rank));
    }
    let genus = rank / 2;
    let pivot = (1..=rank)
        .rev()
        .find(|&i| {
            !r.abelian_image(&Word::generator(rank, i).expect("in range"))
                .expect("rank checked")
                .is_one()
        })
        .ok_or_else(|| {
            Error::Hypothesis("every generator has trivial image in H_1 of the target".into())
        })?;
    let x = Word::generator(rank, pivot)?;
    let pivot_image = r.abelian_image(&x)?.to_string();
    let mut ordering: Vec<usize> = (1..=rank).filter(|&j| j != pivot).collect();
    ordering.push(pivot);
    let coordinates: Vec<usize> = ordering[..rank - 1].to_vec();

    if n == 0 {
        let words: Vec<Word> = (1..=rank).map(|i| Word::generator(rank, i)).collect::<Result<_>>()?;
        let good = tuple_is_good(&words, r, 0)?;
        // P_0 is the same set in every ordering
        let pedigree = Pedigree {
            pivot: None,
            choices: Vec::new(),
        };
        return Ok(SpecialTuple {
            genus,
            level: 0,
            words,
            pedigree,
            certificate: SpecialCertificate {
                ordering,
                pivot,
                pivot_image,
                coordinates: (1..=rank).collect(),
                levels: Vec::new(),
                verdict: Verdict::Exact(good),
            },
        });
    }

    let mut words = base_tuple(rank, pivot)?;
    let base_good = is_good(&good_matrix_on(&words, r, 1, &coordinates)?)?;
    let mut choices = Vec::new();
    let mut levels = Vec::new();
    let mut all_certified = base_good;
    for k in 1..n {
        let survives: Vec<bool> = words
            .iter()
            .map(|w| r.kills_at_level(w, k + 1, oracle).map(|dead| !dead))
            .collect::<Result<_>>()?;
        let anchor = survives.iter().position(|&s| s).ok_or_else(|| {
            Error::Hypothesis(format!(
                "no tuple element survives in G_{}; the homomorphism is not a solution at this level",
                k + 1
            ))
        })?;
        let mut next = Vec::with_capacity(words.len());
        let mut slots = Vec::with_capacity(words.len());
        let mut level_choices = Vec::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            let (z, factor, residual, case, choice) = if survives[i] {
                let z = commutator(w, &conjugate(w, &x)?)?;
                (z, p_factor(w, &x)?, None, Case::Conjugate, Choice::SelfConjugate { generator: rank })
            } else {
                let a = &words[anchor];
                let z = commutator(w, a)?;
                (
                    z,
                    q_factor(w, a)?,
                    Some(q_residual(w, a)?),
                    Case::Anchor,
                    Choice::Cross { partner: anchor + 1 },
                )
            };
            let mut holds = true;
            for &j in &coordinates {
                let lhs = fox(&z, j)?;
                let mut rhs = fox(w, j)?.try_mul(&factor)?;
                if let Some(res) = &residual {
                    rhs = rhs.try_add(&fox(&words[anchor], j)?.try_mul(res)?)?;
                }
                holds &= lhs == rhs;
            }
            let image = r.project(&factor, k + 1)?;
            let factor_nonzero = !image.is_zero(oracle)?;
            let residual_vanishes = match &residual {
                Some(res) => Some(r.project(res, k + 1)?.is_zero(oracle)?),
                None => None,
            };
            all_certified &= holds && factor_nonzero && residual_vanishes.unwrap_or(true);
            slots.push(SlotCertificate {
                slot: i + 1,
                case,
                factor: image.to_string(),
                factor_nonzero,
                factorization_holds: holds,
                residual_vanishes,
            });
            level_choices.push(choice);
            next.push(z);
        }
        levels.push(LevelCertificate {
            level: k + 1,
            anchor: anchor + 1,
            slots,
        });
        choices.push(level_choices);
        words = next;
    }

    let abelian_level = n == 1 || matches!(r, GroupHom::Abelian { .. });
    let verdict = if abelian_level {
        Verdict::Exact(is_good(&good_matrix_on(&words, r, n, &coordinates)?)?)
    } else {
        Verdict::ByFactorization(all_certified)
    };
    Ok(SpecialTuple {
        genus,
        level: n,
        words,
        pedigree: Pedigree {
            pivot: Some(rank),
            choices,
        },
        certificate: SpecialCertificate {
            ordering,
            pivot,
            pivot_image,
            coordinates,
            levels,
            verdict,
        },
    })
}

/// Parse a homomorphism description on the free group of rank `rank`:
///
/// * `ab`: abelianization `x_i -> t_i`
/// * `id`: identity onto the free group
/// * `trivial`: the trivial homomorphism
/// * `ab:1,0;0,1;...`: `x_i` to the listed exponent vector
/// * `free:R:w_1;w_2;...`: `x_i` to words in the free group of rank `R`
pub fn parse_hom(spec: &str, rank: usize) -> Result<GroupHom> {
    let bad = |reason: &str| Error::Parse {
        text: spec.to_string(),
        reason: reason.to_string(),
    };
    match spec.trim() {
        "ab" => return Ok(GroupHom::abelianization(rank)),
        "id" => return Ok(GroupHom::identity(rank)),
        "trivial" => return Ok(GroupHom::trivial(rank)),
        _ => {}
    }
    if let Some(body) = spec.trim().strip_prefix("ab:") {
        let images = body
            .split(';')
            .map(|v| {
                v.split(',')
                    .map(|e| e.trim().parse::<i64>().map_err(|_| bad("bad exponent")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        return GroupHom::abelian(rank, images);
    }
    if let Some(body) = spec.trim().strip_prefix("free:") {
        let (target, words) = body.split_once(':').ok_or_else(|| bad("expected free:R:w1;w2;..."))?;
        let target: usize = target.trim().parse().map_err(|_| bad("bad target rank"))?;
        let images = words
            .split(';')
            .map(|w| Word::parse(w, target))
            .collect::<Result<Vec<_>>>()?;
        return GroupHom::free(rank, images);
    }
    Err(bad("expected ab, id, trivial, ab:..., or free:R:..."))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fox::derived_membership;
    use crate::ring::Monomial;

    fn w(text: &str) -> Word {
        Word::parse(text, 4).unwrap()
    }

    #[test]
    fn small_families() {
        let p0 = TupleFamily::new(2, 0).unwrap();
        let all: Vec<_> = p0.iter().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].words, vec![w("x1"), w("x2"), w("x3"), w("x4")]);

        let p1 = TupleFamily::new(2, 1).unwrap();
        let all: Vec<_> = p1.iter().collect();
        assert_eq!(all.len(), 4);
        assert_eq!(
            all[3].words,
            vec![
                commutator(&w("x4"), &w("x1")).unwrap(),
                commutator(&w("x4"), &w("x2")).unwrap(),
                commutator(&w("x4"), &w("x3")).unwrap()
            ]
        );
        for t in &all {
            assert_eq!(t.words.len(), 3);
        }
        assert_eq!(TupleFamily::new(2, 2).unwrap().count(), BigUint::from(500u32));
        assert_eq!(TupleFamily::new(2, 2).unwrap().children_per_parent(), BigUint::from(125u32));
        assert_eq!(TupleFamily::new(1, 3).unwrap().count(), BigUint::from(2u32));
        assert!(TupleFamily::new(0, 1).is_err());
    }

    #[test]
    fn cursor_matches_random_access() {
        let fam = TupleFamily::new(2, 2).unwrap();
        let seq: Vec<_> = fam.iter().collect();
        assert_eq!(seq.len(), 500);
        for idx in [0u32, 1, 124, 125, 126, 333, 499] {
            let t = fam.tuple_at(&BigUint::from(idx)).unwrap();
            assert_eq!(t, seq[idx as usize]);
            assert_eq!(fam.index_of(&t.pedigree).unwrap(), BigUint::from(idx));
            assert_eq!(fam.tuple_for(&t.pedigree).unwrap(), t.words);
        }
        let part: Vec<_> = fam.range(BigUint::from(120u32), BigUint::from(130u32)).collect();
        assert_eq!(part.len(), 10);
        assert_eq!(part[0], seq[120]);
        assert!(fam.tuple_at(&BigUint::from(500u32)).is_err());
    }

    #[test]
    fn slot_choice_counts() {
        for g in 1..4 {
            for slot in 1..2 * g {
                assert_eq!(slot_choices(g, slot).len(), 4 * g - 3);
            }
        }
    }

    #[test]
    fn members_lie_in_the_derived_series() {
        let fam = TupleFamily::new(2, 1).unwrap();
        for t in fam.iter() {
            for x in &t.words {
                assert!(derived_membership(x, 1).unwrap());
                assert!(!derived_membership(x, 2).unwrap());
            }
        }
    }

    #[test]
    fn base_case_is_diagonal() {
        let tuple = TupleFamily::new(2, 1).unwrap().tuple_at(&BigUint::from(3u32)).unwrap().words;
        let m = good_matrix(&tuple, &GroupHom::identity(4), 1).unwrap();
        let t4 = Monomial::variable(4, 4).pow(-1);
        let diag = Laurent::from_terms(4, [(t4, 1), (Monomial::one(4), -1)]).unwrap();
        for a in 0..3 {
            for i in 0..3 {
                let expect = if a == i { diag.clone() } else { Laurent::zero(4) };
                assert_eq!(m.entries[a][i], QuotientImage::Abelian(expect));
            }
        }
        assert!(is_good(&m).unwrap());
        // killing x4 kills the diagonal
        let r = GroupHom::abelian(4, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]).unwrap();
        assert!(!tuple_is_good(&tuple, &r, 1).unwrap());
        // the trivial homomorphism gives the zero matrix
        let z = good_matrix(&tuple, &GroupHom::trivial(4), 1).unwrap();
        assert!(z.laurent().unwrap().iter().flatten().all(Laurent::is_zero));
        assert!(!is_good(&z).unwrap());
    }

    #[test]
    fn level_zero_matrix_is_identity() {
        let tuple: Vec<Word> = (1..=4).map(|i| Word::generator(4, i).unwrap()).collect();
        let m = good_matrix(&tuple, &GroupHom::abelianization(4), 0).unwrap();
        for a in 0..4 {
            for i in 0..4 {
                let l = &m.laurent().unwrap()[a][i];
                assert_eq!(l.augmentation(), i64::from(a == i));
            }
        }
        assert!(is_good(&m).unwrap());
    }

    #[test]
    fn repeated_column_is_not_good() {
        let tuple = vec![commutator(&w("x4"), &w("x1")).unwrap(); 3];
        assert!(!tuple_is_good(&tuple, &GroupHom::abelianization(4), 1).unwrap());
    }

    #[test]
    fn non_abelian_entries_are_refused() {
        let tuple = TupleFamily::new(2, 2).unwrap().tuple_at(&BigUint::zero()).unwrap().words;
        let m = good_matrix(&tuple, &GroupHom::identity(4), 2).unwrap();
        assert!(matches!(is_good(&m), Err(Error::NonAbelianTarget(_))));
    }

    #[test]
    fn special_tuple_base_case() {
        let mut oracle = DerivedSeriesOracle::default();
        let s = find_special_tuple(&GroupHom::abelianization(4), 1, &mut oracle).unwrap();
        assert_eq!(
            s.words,
            vec![
                commutator(&w("x4"), &w("x1")).unwrap(),
                commutator(&w("x4"), &w("x2")).unwrap(),
                commutator(&w("x4"), &w("x3")).unwrap()
            ]
        );
        assert_eq!(s.certificate.pivot, 4);
        assert_eq!(s.certificate.pivot_image, "t4");
        assert_eq!(s.certificate.verdict, Verdict::Exact(true));
        assert!(find_special_tuple(&GroupHom::trivial(4), 1, &mut oracle).is_err());
        let s0 = find_special_tuple(&GroupHom::abelianization(4), 0, &mut oracle).unwrap();
        assert_eq!(s0.words.len(), 4);
        assert!(s0.certificate.verdict.is_good());
    }

    #[test]
    fn special_tuple_with_reordering() {
        // only x2 survives in H_1
        let r = GroupHom::abelian(4, vec![vec![0], vec![1], vec![0], vec![0]]).unwrap();
        let mut oracle = DerivedSeriesOracle::default();
        let s = find_special_tuple(&r, 1, &mut oracle).unwrap();
        assert_eq!(s.certificate.pivot, 2);
        assert_eq!(s.certificate.ordering, vec![1, 3, 4, 2]);
        assert_eq!(s.certificate.verdict, Verdict::Exact(true));
        let fam = TupleFamily::new(2, 1).unwrap();
        assert_eq!(fam.tuple_for(&s.pedigree).unwrap(), s.reordered_words().unwrap());
    }

    #[test]
    fn special_tuple_over_free_solvable_quotients() {
        let mut oracle = DerivedSeriesOracle::default();
        let s = find_special_tuple(&GroupHom::identity(4), 2, &mut oracle).unwrap();
        assert_eq!(s.certificate.verdict, Verdict::ByFactorization(true));
        let lvl = &s.certificate.levels[0];
        assert!(lvl.slots.iter().all(|c| c.case == Case::Conjugate && c.factorization_holds && c.factor_nonzero));
        let fam = TupleFamily::new(2, 2).unwrap();
        assert_eq!(fam.tuple_for(&s.pedigree).unwrap(), s.reordered_words().unwrap());
        for x in &s.words {
            assert!(oracle.contains(x, 2).unwrap());
        }
        // abelian targets have no survivors past level 1
        assert!(matches!(
            find_special_tuple(&GroupHom::abelianization(4), 2, &mut oracle),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn anchor_case_appears_when_a_slot_dies() {
        // r: x1 -> y1, x2 -> y2, x3 -> 1, x4 -> y1 into F_2; the slot [x4, x3]
        // dies at level 2 while [x4, x1] survives
        let r = parse_hom("free:2:x1;x2;1;x1 x2", 4).unwrap();
        let mut oracle = DerivedSeriesOracle::default();
        let s = find_special_tuple(&r, 2, &mut oracle).unwrap();
        let cases: Vec<Case> = s.certificate.levels[0].slots.iter().map(|c| c.case).collect();
        assert!(cases.contains(&Case::Anchor));
        for c in &s.certificate.levels[0].slots {
            assert!(c.factorization_holds, "{c:?}");
            assert!(c.factor_nonzero, "{c:?}");
            if c.case == Case::Anchor {
                assert_eq!(c.residual_vanishes, Some(true));
            }
        }
        assert!(s.certificate.verdict.is_good());
    }

    #[test]
    fn hom_specs() {
        assert_eq!(parse_hom("ab", 4).unwrap(), GroupHom::abelianization(4));
        assert_eq!(parse_hom("id", 4).unwrap(), GroupHom::identity(4));
        let r = parse_hom("ab:1,0;0,1;0,0;1,1", 4).unwrap();
        assert_eq!(r.abelian_image(&w("x4")).unwrap(), Monomial::new(vec![1, 1]));
        assert!(parse_hom("ab:1;2", 4).is_err());
        assert!(parse_hom("nope", 4).is_err());
        assert!(parse_hom("free:2:x1;x2;x3;x1", 4).is_err());
    }
}
