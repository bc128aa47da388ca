//! Free differential calculus on `Z[F]`.
//!
//! Two conventions live here. The *conjugated* derivative `∂_i`, used by the
//! tuple machinery, satisfies
//!
//! ```text
//! ∂_i(x_j) = δ_ij,   ∂_i(e) = 0,   ∂_i(gh) = ∂_i(g) + ∂_i(h) g^{-1},
//! ```
//!
//! and the classical left derivative `d_i` satisfies `d_i(gh) = d_i(g) + g d_i(h)`.
//! They are related by `∂_i = bar(d_i)` where `bar` is the group-ring
//! involution. The inverse rule forced by `∂(e) = 0` is
//! `∂(g^{-1}) = -∂(g) g`.
//!
//! The recursive engines [`fox`] and [`fox_classical`] are the source of
//! truth; the closed forms below are independent expressions used as
//! oracles and as certificate factors.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ring::FreeGroupRing;
use crate::words::{commutator, conjugate, Syllable, Word};

fn check_index(w: &Word, i: usize) -> Result<()> {
    if i == 0 || i > w.rank() {
        return Err(Error::GeneratorOutOfRange {
            index: i,
            rank: w.rank(),
        });
    }
    Ok(())
}

/// Walk the letters of `w`, handing each occurrence of `x_i^{±1}` together
/// with the prefix strictly before it.
fn for_each_occurrence(w: &Word, i: usize, mut visit: impl FnMut(&[Syllable], i64, i64)) {
    let syllables = w.syllables();
    for (pos, s) in syllables.iter().enumerate() {
        if s.generator != i {
            continue;
        }
        let prefix = &syllables[..pos];
        let sign = s.exponent.signum();
        for m in 0..s.exponent.unsigned_abs() as i64 {
            // the letter sits after prefix * x_i^{sign*m}
            visit(prefix, sign, sign * m);
        }
    }
}

fn prefix_word(rank: usize, prefix: &[Syllable], generator: usize, extra: i64) -> Word {
    let mut syl = prefix.to_vec();
    if extra != 0 {
        syl.push(Syllable {
            generator,
            exponent: extra,
        });
    }
    Word::from_reduced(rank, syl)
}

/// The conjugated Fox derivative `∂_i w`.
pub fn fox(w: &Word, i: usize) -> Result<FreeGroupRing> {
    check_index(w, i)?;
    let rank = w.rank();
    let mut terms = Vec::new();
    for_each_occurrence(w, i, |prefix, sign, partial| {
        if sign > 0 {
            // + (P x_i^m)^{-1}
            terms.push((prefix_word(rank, prefix, i, partial).inverse(), 1));
        } else {
            // - (P x_i^{-(m+1)})^{-1}
            terms.push((prefix_word(rank, prefix, i, partial - 1).inverse(), -1));
        }
    });
    FreeGroupRing::from_terms(rank, terms)
}

/// The classical left Fox derivative `d_i w`.
pub fn fox_classical(w: &Word, i: usize) -> Result<FreeGroupRing> {
    check_index(w, i)?;
    let rank = w.rank();
    let mut terms = Vec::new();
    for_each_occurrence(w, i, |prefix, sign, partial| {
        if sign > 0 {
            terms.push((prefix_word(rank, prefix, i, partial), 1));
        } else {
            terms.push((prefix_word(rank, prefix, i, partial - 1), -1));
        }
    });
    FreeGroupRing::from_terms(rank, terms)
}

/// `∂[g,h] = ∂g + (∂h)g^{-1} - (∂g) g h^{-1} g^{-1} - (∂h) h g h^{-1} g^{-1}`,
/// evaluated from the derivatives of `g` and `h`.
pub fn commutator_fox_closed_form(g: &Word, h: &Word, i: usize) -> Result<FreeGroupRing> {
    let dg = fox(g, i)?;
    let dh = fox(h, i)?;
    let gi = g.inverse();
    let hi = h.inverse();
    let t2 = dh.mul_element_right(&gi);
    let t3 = dg.mul_element_right(&g.concat(&hi)?.concat(&gi)?);
    // h g h^{-1} g^{-1} = [g,h]^{-1}
    let t4 = dh.mul_element_right(&commutator(g, h)?.inverse());
    Ok(&(&(&dg + &t2) - &t3) - &t4)
}

/// The Case-1 factor `p = 1 + x w^{-1} - (w^x)^{-1}[w^x, w] - x[w^x, w]`.
///
/// When `∂_j x = 0` it satisfies `∂_j [w, w^x] = (∂_j w) p`.
pub fn p_factor(w: &Word, x: &Word) -> Result<FreeGroupRing> {
    let wx = conjugate(w, x)?;
    let c = commutator(&wx, w)?;
    let rank = w.rank();
    FreeGroupRing::from_terms(
        rank,
        [
            (Word::identity(rank), 1),
            (x.concat(&w.inverse())?, 1),
            (wx.inverse().concat(&c)?, -1),
            (x.concat(&c)?, -1),
        ],
    )
}

/// The Case-2 factor `q = 1 - w_1^{-1}[w_1, w_i]`.
///
/// Together with [`q_residual`] it satisfies
/// `∂_j [w_i, w_1] = (∂_j w_i) q + (∂_j w_1)(w_i^{-1} - [w_1, w_i])`.
pub fn q_factor(w_i: &Word, w_1: &Word) -> Result<FreeGroupRing> {
    let c = commutator(w_1, w_i)?;
    let rank = w_i.rank();
    FreeGroupRing::from_terms(
        rank,
        [(Word::identity(rank), 1), (w_1.inverse().concat(&c)?, -1)],
    )
}

/// The second Case-2 coefficient `w_i^{-1} - [w_1, w_i]`, which dies in any
/// quotient where `w_i` is trivial.
pub fn q_residual(w_i: &Word, w_1: &Word) -> Result<FreeGroupRing> {
    let c = commutator(w_1, w_i)?;
    FreeGroupRing::from_terms(w_i.rank(), [(w_i.inverse(), 1), (c, -1)])
}

/// Default step budget of a fresh [`DerivedSeriesOracle`].
pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// Decides membership in the derived series `F^(k)` of a free group and
/// equality in the group rings `Z[F/F^(k)]`.
///
/// The recursion is the Fox criterion for free solvable groups: for `k >= 1`,
/// `w ∈ F^(k+1)` iff every `d_i w` vanishes in `Z[F/F^(k)]`. Vanishing in
/// `Z[F/F^(k)]` is decided by sorting terms into cosets of `F^(k)`, which
/// again asks membership questions one level down. Results are memoised per
/// oracle; cost is charged in letters processed against an explicit budget.
#[derive(Debug, Clone)]
pub struct DerivedSeriesOracle {
    budget: u64,
    spent: u64,
    cache: HashMap<(Word, usize), bool>,
}

impl Default for DerivedSeriesOracle {
    fn default() -> Self {
        Self::with_budget(DEFAULT_BUDGET)
    }
}

impl DerivedSeriesOracle {
    pub fn with_budget(budget: u64) -> Self {
        DerivedSeriesOracle {
            budget,
            spent: 0,
            cache: HashMap::new(),
        }
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    fn charge(&mut self, cost: u64) -> Result<()> {
        self.spent = self.spent.saturating_add(cost);
        if self.spent > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// Is `w ∈ F^(level)`?
    pub fn contains(&mut self, w: &Word, level: usize) -> Result<bool> {
        if level == 0 || w.is_identity() {
            return Ok(true);
        }
        if w.abelianize().iter().any(|&e| e != 0) {
            return Ok(false);
        }
        if level == 1 {
            return Ok(true);
        }
        let key = (w.clone(), level);
        if let Some(&known) = self.cache.get(&key) {
            return Ok(known);
        }
        self.charge((w.letter_len() * w.rank()) as u64)?;
        let mut member = true;
        for i in 1..=w.rank() {
            let d = fox_classical(w, i)?;
            if !self.vanishes_in_quotient(&d, level - 1)? {
                member = false;
                break;
            }
        }
        self.cache.insert(key, member);
        Ok(member)
    }

    /// Do `g` and `h` represent the same element of `F/F^(level)`?
    pub fn same_class(&mut self, g: &Word, h: &Word, level: usize) -> Result<bool> {
        self.contains(&g.concat(&h.inverse())?, level)
    }

    /// Is the image of `e` in `Z[F/F^(level)]` zero?
    pub fn vanishes_in_quotient(&mut self, e: &FreeGroupRing, level: usize) -> Result<bool> {
        if level == 0 {
            return Ok(e.augmentation() == 0);
        }
        // cosets of F^(level) refine cosets of F^(1)
        let mut by_abelian: HashMap<Vec<i64>, Vec<(&Word, i64)>> = HashMap::new();
        for (g, c) in e.terms() {
            by_abelian.entry(g.abelianize()).or_default().push((g, c));
        }
        for group in by_abelian.values() {
            if level == 1 {
                if group.iter().map(|t| t.1).sum::<i64>() != 0 {
                    return Ok(false);
                }
                continue;
            }
            let mut classes: Vec<(&Word, i64)> = Vec::new();
            for &(g, c) in group {
                let mut placed = false;
                for class in classes.iter_mut() {
                    if self.same_class(g, class.0, level)? {
                        class.1 += c;
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    classes.push((g, c));
                }
            }
            if classes.iter().any(|c| c.1 != 0) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Is `w` in the `k`-th derived subgroup `F^(k)`? Uses a fresh oracle with
/// the default budget.
pub fn derived_membership(w: &Word, k: usize) -> Result<bool> {
    DerivedSeriesOracle::default().contains(w, k)
}
