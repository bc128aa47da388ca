//! Integral group rings `Z[G]` for the groups this crate works with:
//! free groups (noncommutative), free abelian groups (Laurent polynomials)
//! and free solvable quotients `F/F^(k)`, whose equality is decided lazily
//! through the derived-series oracle in [`crate::fox`].

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::fox::DerivedSeriesOracle;
use crate::words::Word;

/// A group whose elements have a canonical, totally ordered representative.
pub trait GroupElement: Clone + Ord + Hash + fmt::Debug + fmt::Display {
    /// Descriptor of the ambient group (rank or dimension).
    type Base: Copy + Eq + fmt::Debug;

    fn base(&self) -> Self::Base;
    fn identity(base: Self::Base) -> Self;
    /// Group operation; callers guarantee equal bases.
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
}

impl GroupElement for Word {
    type Base = usize;

    fn base(&self) -> usize {
        self.rank()
    }

    fn identity(rank: usize) -> Self {
        Word::identity(rank)
    }

    fn compose(&self, other: &Self) -> Self {
        self.concat_unchecked(other)
    }

    fn inverse(&self) -> Self {
        Word::inverse(self)
    }
}

/// An element `t_1^{a_1} ... t_m^{a_m}` of the free abelian group `Z^m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<i64>);

impl Monomial {
    pub fn new(exponents: Vec<i64>) -> Self {
        Monomial(exponents)
    }

    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim])
    }

    /// The variable `t_index` (1-based).
    pub fn variable(dim: usize, index: usize) -> Self {
        let mut v = vec![0; dim];
        v[index - 1] = 1;
        Monomial(v)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn pow(&self, k: i64) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }
}

impl GroupElement for Monomial {
    type Base = usize;

    fn base(&self) -> usize {
        self.0.len()
    }

    fn identity(dim: usize) -> Self {
        Monomial::one(dim)
    }

    fn compose(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn inverse(&self) -> Self {
        Monomial(self.0.iter().map(|e| -e).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (k, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "t{}", k + 1)?;
            } else {
                write!(f, "t{}^{}", k + 1, e)?;
            }
        }
        Ok(())
    }
}

/// A finite formal integer combination of group elements.
///
/// Zero coefficients are never stored; the term map is keyed by canonical
/// representatives, so structural equality is ring equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRing<G: GroupElement> {
    base: G::Base,
    terms: BTreeMap<G, i64>,
}

/// `Z[F]` for a free group `F`.
pub type FreeGroupRing = GroupRing<Word>;
/// `Z[Z^m]`, the multivariate Laurent polynomial ring.
pub type Laurent = GroupRing<Monomial>;

fn mismatch<B: fmt::Debug>(a: B, b: B) -> Error {
    Error::BaseMismatch(format!("{a:?} vs {b:?}"))
}

fn add_coefficient<G: GroupElement>(terms: &mut BTreeMap<G, i64>, g: G, c: i64) {
    if c == 0 {
        return;
    }
    let entry = terms.entry(g);
    match entry {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get().checked_add(c).expect("group ring coefficient overflow");
            if sum == 0 {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

impl<G: GroupElement> GroupRing<G> {
    pub fn zero(base: G::Base) -> Self {
        GroupRing {
            base,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(base: G::Base) -> Self {
        Self::from_element(G::identity(base))
    }

    pub fn from_element(g: G) -> Self {
        Self::monomial(g, 1)
    }

    pub fn monomial(g: G, coefficient: i64) -> Self {
        let mut r = Self::zero(g.base());
        add_coefficient(&mut r.terms, g, coefficient);
        r
    }

    /// Collect terms, merging equal representatives.
    pub fn from_terms<I>(base: G::Base, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (G, i64)>,
    {
        let mut r = Self::zero(base);
        for (g, c) in terms {
            if g.base() != base {
                return Err(mismatch(g.base(), base));
            }
            add_coefficient(&mut r.terms, g, c);
        }
        Ok(r)
    }

    pub fn base(&self) -> G::Base {
        self.base
    }

    pub fn terms(&self) -> impl Iterator<Item = (&G, i64)> {
        self.terms.iter().map(|(g, &c)| (g, c))
    }

    pub fn coefficient(&self, g: &G) -> i64 {
        self.terms.get(g).copied().unwrap_or(0)
    }

    /// Exact zero test; exact for free and free abelian groups because
    /// representatives are canonical.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.base != other.base {
            return Err(mismatch(self.base, other.base));
        }
        let mut r = self.clone();
        for (g, &c) in &other.terms {
            add_coefficient(&mut r.terms, g.clone(), c);
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.base != other.base {
            return Err(mismatch(self.base, other.base));
        }
        let mut r = Self::zero(self.base);
        for (g, &c) in &self.terms {
            for (h, &d) in &other.terms {
                let c = c.checked_mul(d).expect("group ring coefficient overflow");
                add_coefficient(&mut r.terms, g.compose(h), c);
            }
        }
        Ok(r)
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut r = Self::zero(self.base);
        for (g, &c) in &self.terms {
            add_coefficient(&mut r.terms, g.clone(), c * k);
        }
        r
    }

    /// `self * g` for a single group element.
    pub fn mul_element_right(&self, g: &G) -> Self {
        let mut r = Self::zero(self.base);
        for (h, &c) in &self.terms {
            add_coefficient(&mut r.terms, h.compose(g), c);
        }
        r
    }

    /// `g * self` for a single group element.
    pub fn mul_element_left(&self, g: &G) -> Self {
        let mut r = Self::zero(self.base);
        for (h, &c) in &self.terms {
            add_coefficient(&mut r.terms, g.compose(h), c);
        }
        r
    }

    /// The ring map `Z[G] -> Z` sending every group element to 1.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }

    /// The anti-involution `sum c g -> sum c g^{-1}`.
    pub fn involution(&self) -> Self {
        let mut r = Self::zero(self.base);
        for (g, &c) in &self.terms {
            add_coefficient(&mut r.terms, g.inverse(), c);
        }
        r
    }

    /// Linear extension of a map on group elements.
    pub fn map<H, F>(&self, target: H::Base, f: F) -> GroupRing<H>
    where
        H: GroupElement,
        F: Fn(&G) -> H,
    {
        let mut r = GroupRing::zero(target);
        for (g, &c) in &self.terms {
            let h = f(g);
            debug_assert_eq!(h.base(), target);
            add_coefficient(&mut r.terms, h, c);
        }
        r
    }
}

impl<G: GroupElement> std::ops::Add for &GroupRing<G> {
    type Output = GroupRing<G>;

    fn add(self, rhs: Self) -> GroupRing<G> {
        self.try_add(rhs).expect("group ring base mismatch")
    }
}

impl<G: GroupElement> std::ops::Sub for &GroupRing<G> {
    type Output = GroupRing<G>;

    fn sub(self, rhs: Self) -> GroupRing<G> {
        self.try_sub(rhs).expect("group ring base mismatch")
    }
}

impl<G: GroupElement> std::ops::Mul for &GroupRing<G> {
    type Output = GroupRing<G>;

    fn mul(self, rhs: Self) -> GroupRing<G> {
        self.try_mul(rhs).expect("group ring base mismatch")
    }
}

impl<G: GroupElement> std::ops::Neg for &GroupRing<G> {
    type Output = GroupRing<G>;

    fn neg(self) -> GroupRing<G> {
        GroupRing::neg(self)
    }
}

impl<G: GroupElement> fmt::Display for GroupRing<G> {
    /// Canonical text: terms in representative order as `±c*rep`, with
    /// multi-syllable representatives parenthesised; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (g, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            let rep = g.to_string();
            let sign = if *c < 0 { '-' } else { '+' };
            if rep.contains(' ') {
                write!(f, "{sign}{}*({rep})", c.abs())?;
            } else {
                write!(f, "{sign}{}*{rep}", c.abs())?;
            }
        }
        Ok(())
    }
}

/// Descriptor of the ring an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingBase {
    FreeGroup { rank: usize },
    FreeAbelian { dim: usize },
    SolvableQuotient { rank: usize, level: usize },
}

impl fmt::Display for RingBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingBase::FreeGroup { rank } => write!(f, "Z[F_{rank}]"),
            RingBase::FreeAbelian { dim } => write!(f, "Z[Z^{dim}]"),
            RingBase::SolvableQuotient { rank, level } => {
                write!(f, "Z[F_{rank}/F_{rank}^({level})]")
            }
        }
    }
}

/// An element of `Z[F/F^(level)]`, stored through representatives in `Z[F]`.
///
/// Two representatives are merged only when the derived-series oracle
/// proves `g h^{-1}` lies in `F^(level)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvableElement {
    level: usize,
    lift: FreeGroupRing,
}

impl SolvableElement {
    pub fn new(lift: FreeGroupRing, level: usize) -> Self {
        SolvableElement { level, lift }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn lift(&self) -> &FreeGroupRing {
        &self.lift
    }

    pub fn base(&self) -> RingBase {
        RingBase::SolvableQuotient {
            rank: self.lift.base(),
            level: self.level,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.level != other.level {
            return Err(mismatch(self.base(), other.base()));
        }
        Ok(SolvableElement::new(self.lift.try_add(&other.lift)?, self.level))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.level != other.level {
            return Err(mismatch(self.base(), other.base()));
        }
        Ok(SolvableElement::new(self.lift.try_mul(&other.lift)?, self.level))
    }

    /// Decide whether the element vanishes in the quotient group ring.
    pub fn is_zero(&self, oracle: &mut DerivedSeriesOracle) -> Result<bool> {
        oracle.vanishes_in_quotient(&self.lift, self.level)
    }
}

/// A homomorphism out of the free group `F` of rank `source_rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupHom {
    /// Into `Z^dim`, given by the images of the generators.
    Abelian {
        source_rank: usize,
        images: Vec<Monomial>,
    },
    /// Into the free group of rank `target_rank`.
    Free {
        source_rank: usize,
        target_rank: usize,
        images: Vec<Word>,
    },
}

/// Image of a `Z[F]` element under [`GroupHom::apply`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomImage {
    Abelian(Laurent),
    Free(FreeGroupRing),
}

/// Image of a `Z[F]` element in `Z[G_k]`, the group ring of the k-th
/// solvable quotient of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientImage {
    Abelian(Laurent),
    Solvable(SolvableElement),
}

impl QuotientImage {
    pub fn is_zero(&self, oracle: &mut DerivedSeriesOracle) -> Result<bool> {
        match self {
            QuotientImage::Abelian(l) => Ok(l.is_zero()),
            QuotientImage::Solvable(s) => s.is_zero(oracle),
        }
    }

    pub fn base(&self) -> RingBase {
        match self {
            QuotientImage::Abelian(l) => RingBase::FreeAbelian { dim: l.base() },
            QuotientImage::Solvable(s) => s.base(),
        }
    }
}

impl fmt::Display for QuotientImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientImage::Abelian(l) => write!(f, "{l}"),
            QuotientImage::Solvable(s) => write!(f, "{}", s.lift),
        }
    }
}

impl GroupHom {
    /// `F -> H_1(F) = Z^rank`, `x_i -> t_i`.
    pub fn abelianization(rank: usize) -> Self {
        GroupHom::Abelian {
            source_rank: rank,
            images: (1..=rank).map(|i| Monomial::variable(rank, i)).collect(),
        }
    }

    pub fn identity(rank: usize) -> Self {
        GroupHom::Free {
            source_rank: rank,
            target_rank: rank,
            images: (1..=rank)
                .map(|i| Word::generator(rank, i).expect("index in range"))
                .collect(),
        }
    }

    /// The trivial homomorphism onto the trivial group `Z^0`.
    pub fn trivial(rank: usize) -> Self {
        GroupHom::Abelian {
            source_rank: rank,
            images: vec![Monomial::one(0); rank],
        }
    }

    pub fn abelian(source_rank: usize, images: Vec<Vec<i64>>) -> Result<Self> {
        if images.len() != source_rank {
            return Err(Error::InvalidArgument(format!(
                "expected {source_rank} generator images, got {}",
                images.len()
            )));
        }
        let dim = images.first().map_or(0, Vec::len);
        if images.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidArgument(
                "abelian images must share one dimension".into(),
            ));
        }
        Ok(GroupHom::Abelian {
            source_rank,
            images: images.into_iter().map(Monomial::new).collect(),
        })
    }

    pub fn free(source_rank: usize, images: Vec<Word>) -> Result<Self> {
        if images.len() != source_rank {
            return Err(Error::InvalidArgument(format!(
                "expected {source_rank} generator images, got {}",
                images.len()
            )));
        }
        let target_rank = images
            .first()
            .map(Word::rank)
            .ok_or_else(|| Error::InvalidArgument("no generator images".into()))?;
        if images.iter().any(|w| w.rank() != target_rank) {
            return Err(Error::InvalidArgument(
                "free images must share one rank".into(),
            ));
        }
        Ok(GroupHom::Free {
            source_rank,
            target_rank,
            images,
        })
    }

    pub fn source_rank(&self) -> usize {
        match self {
            GroupHom::Abelian { source_rank, .. } | GroupHom::Free { source_rank, .. } => {
                *source_rank
            }
        }
    }

    /// Rank of `H_1` of the target: `dim` for abelian targets.
    pub fn abelian_dim(&self) -> usize {
        match self {
            GroupHom::Abelian { images, .. } => images.first().map_or(0, Monomial::dim),
            GroupHom::Free { target_rank, .. } => *target_rank,
        }
    }

    fn check_source(&self, w: &Word) -> Result<()> {
        if w.rank() != self.source_rank() {
            return Err(mismatch(w.rank(), self.source_rank()));
        }
        Ok(())
    }

    /// `r∘π_1`: the image of a word in the abelianization of the target.
    pub fn abelian_image(&self, w: &Word) -> Result<Monomial> {
        self.check_source(w)?;
        let dim = self.abelian_dim();
        let mut out = vec![0i64; dim];
        match self {
            GroupHom::Abelian { images, .. } => {
                for s in w.syllables() {
                    for (o, e) in out.iter_mut().zip(images[s.generator - 1].exponents()) {
                        *o += s.exponent * e;
                    }
                }
            }
            GroupHom::Free { images, .. } => {
                for s in w.syllables() {
                    for (o, e) in out.iter_mut().zip(images[s.generator - 1].abelianize()) {
                        *o += s.exponent * e;
                    }
                }
            }
        }
        Ok(Monomial::new(out))
    }

    /// The image word for a free target.
    pub fn free_image(&self, w: &Word) -> Result<Word> {
        self.check_source(w)?;
        match self {
            GroupHom::Free {
                target_rank,
                images,
                ..
            } => {
                let mut acc = Word::identity(*target_rank);
                for s in w.syllables() {
                    acc = acc.concat_unchecked(&images[s.generator - 1].power(s.exponent));
                }
                Ok(acc)
            }
            GroupHom::Abelian { .. } => Err(Error::InvalidArgument(
                "homomorphism has an abelian target".into(),
            )),
        }
    }

    /// Linear extension to `Z[F]`.
    pub fn apply(&self, e: &FreeGroupRing) -> Result<HomImage> {
        if e.base() != self.source_rank() {
            return Err(mismatch(e.base(), self.source_rank()));
        }
        match self {
            GroupHom::Abelian { .. } => {
                let dim = self.abelian_dim();
                Ok(HomImage::Abelian(e.map(dim, |w| {
                    self.abelian_image(w).expect("rank checked")
                })))
            }
            GroupHom::Free { target_rank, .. } => Ok(HomImage::Free(
                e.map(*target_rank, |w| self.free_image(w).expect("rank checked")),
            )),
        }
    }

    /// `r∘π_k` into `Z[G_k]` where `G_k = G/G^(k)` for the target `G`.
    ///
    /// For abelian targets `G_k = G` once `k >= 1`; `G_0` is trivial.
    pub fn project(&self, e: &FreeGroupRing, level: usize) -> Result<QuotientImage> {
        if e.base() != self.source_rank() {
            return Err(mismatch(e.base(), self.source_rank()));
        }
        if level == 0 {
            return Ok(QuotientImage::Abelian(Laurent::from_terms(
                0,
                [(Monomial::one(0), e.augmentation())],
            )?));
        }
        match self {
            GroupHom::Free { target_rank, .. } if level >= 2 => {
                let lifted = e.map(*target_rank, |w| self.free_image(w).expect("rank checked"));
                Ok(QuotientImage::Solvable(SolvableElement::new(lifted, level)))
            }
            _ => {
                let dim = self.abelian_dim();
                Ok(QuotientImage::Abelian(e.map(dim, |w| {
                    self.abelian_image(w).expect("rank checked")
                })))
            }
        }
    }

    /// Is `r∘π_k(w)` the identity of `G_k`?
    pub fn kills_at_level(
        &self,
        w: &Word,
        level: usize,
        oracle: &mut DerivedSeriesOracle,
    ) -> Result<bool> {
        if level == 0 {
            return Ok(true);
        }
        match self {
            GroupHom::Free { .. } if level >= 2 => {
                let image = self.free_image(w)?;
                oracle.contains(&image, level)
            }
            _ => Ok(self.abelian_image(w)?.is_one()),
        }
    }
}
