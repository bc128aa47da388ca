//! Seifert matrices and the classical invariants read off them.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{determinant, pencil_determinant, to_big, transpose};
use crate::poly::IntPoly;
use crate::ring::{Laurent, Monomial};

/// A `2g × 2g` integer Seifert matrix `V` with `det(V - Vᵀ) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SeifertJson", into = "SeifertJson")]
pub struct SeifertMatrix {
    entries: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeifertJson {
    genus: usize,
    matrix: Vec<Vec<i64>>,
}

impl TryFrom<SeifertJson> for SeifertMatrix {
    type Error = Error;

    fn try_from(raw: SeifertJson) -> Result<Self> {
        if raw.matrix.len() != 2 * raw.genus {
            return Err(Error::InvalidSeifert(format!(
                "genus {} needs a {}x{} matrix, got {} rows",
                raw.genus,
                2 * raw.genus,
                2 * raw.genus,
                raw.matrix.len()
            )));
        }
        SeifertMatrix::new(raw.matrix)
    }
}

impl From<SeifertMatrix> for SeifertJson {
    fn from(v: SeifertMatrix) -> Self {
        SeifertJson {
            genus: v.genus(),
            matrix: v.entries,
        }
    }
}

impl SeifertMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidSeifert("matrix is not square".into()));
        }
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidSeifert(format!("odd size {n}")));
        }
        let v = SeifertMatrix { entries };
        let d = determinant(&v.antisymmetric());
        if !d.is_one() {
            return Err(Error::InvalidSeifert(format!(
                "det(V - V^T) = {d}, expected 1"
            )));
        }
        Ok(v)
    }

    pub fn unknot() -> Self {
        SeifertMatrix {
            entries: Vec::new(),
        }
    }

    /// The right-handed trefoil.
    pub fn trefoil() -> Self {
        SeifertMatrix {
            entries: vec![vec![-1, 1], vec![0, -1]],
        }
    }

    /// The left-handed trefoil, the mirror of [`SeifertMatrix::trefoil`].
    pub fn left_trefoil() -> Self {
        SeifertMatrix {
            entries: vec![vec![1, 0], vec![-1, 1]],
        }
    }

    pub fn figure_eight() -> Self {
        SeifertMatrix {
            entries: vec![vec![-1, 1], vec![0, 1]],
        }
    }

    /// The `(2, 2k+1)` torus knot from its standard genus-`k` surface.
    pub fn torus_2(k: usize) -> Self {
        let n = 2 * k;
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            -1
                        } else if j == i + 1 {
                            1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        SeifertMatrix { entries }
    }

    pub fn genus(&self) -> usize {
        self.entries.len() / 2
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub(crate) fn big(&self) -> Vec<Vec<BigInt>> {
        to_big(&self.entries)
    }

    /// `V - Vᵀ`
    pub(crate) fn antisymmetric(&self) -> Vec<Vec<BigInt>> {
        let v = self.big();
        let vt = transpose(&v);
        v.iter()
            .zip(&vt)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect()
    }

    /// `V + Vᵀ`
    pub(crate) fn symmetric(&self) -> Vec<Vec<BigInt>> {
        let v = self.big();
        let vt = transpose(&v);
        v.iter()
            .zip(&vt)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect()
    }

    /// Block-diagonal sum, the Seifert matrix of the connected sum.
    pub fn connected_sum(&self, other: &SeifertMatrix) -> SeifertMatrix {
        let (a, b) = (self.size(), other.size());
        let mut entries = vec![vec![0; a + b]; a + b];
        for i in 0..a {
            entries[i][..a].copy_from_slice(&self.entries[i]);
        }
        for i in 0..b {
            entries[a + i][a..].copy_from_slice(&other.entries[i]);
        }
        SeifertMatrix { entries }
    }

    /// `-Vᵀ`, the Seifert matrix of the reversed mirror image.
    pub fn mirror_reverse(&self) -> SeifertMatrix {
        let entries = transpose(&self.entries)
            .into_iter()
            .map(|r| r.into_iter().map(|x| -x).collect())
            .collect();
        SeifertMatrix { entries }
    }

    /// Split into the diagonal blocks given by the connected components of
    /// the nonzero pattern of `V + Vᵀ`-style adjacency. Each block is
    /// itself a valid Seifert matrix, since `det(V - Vᵀ)` factors into
    /// block determinants that are nonnegative squares.
    pub fn blocks(&self) -> Vec<SeifertMatrix> {
        let n = self.size();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for i in 0..n {
            for j in 0..n {
                if self.entries[i][j] != 0 {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(i);
        }
        groups
            .into_iter()
            .map(|idx| SeifertMatrix {
                entries: idx
                    .iter()
                    .map(|&i| idx.iter().map(|&j| self.entries[i][j]).collect())
                    .collect(),
            })
            .collect()
    }

    /// `det(tV - Vᵀ)` before normalisation.
    fn raw_alexander(&self) -> IntPoly {
        let v = self.big();
        pencil_determinant(&v, &transpose(&v))
    }

    pub fn alexander(&self) -> AlexanderPolynomial {
        let p = self
            .blocks()
            .iter()
            .fold(IntPoly::one(), |acc, b| acc.mul(&b.raw_alexander()));
        AlexanderPolynomial::normalize(&p)
    }

    /// The hypothesis on the Alexander polynomial for solvability level
    /// `n`: degree above 2, or degree 2 allowed when `n = 1`.
    pub fn degree_gate(&self, n: usize) -> Result<bool> {
        degree_gate_for(&BigUint::from(self.alexander().degree()), n)
    }

    /// Arf invariant via `Δ(-1) ≡ ±1 (mod 8)` exactly when it vanishes.
    pub fn arf(&self) -> u8 {
        arf_from_residue(&self.alexander().eval(&BigInt::from(-1)))
    }

    /// `tV - Vᵀ` over `Z[t^{±1}]`.
    pub fn localized_presentation(&self) -> Vec<Vec<Laurent>> {
        let n = self.size();
        let t = |e: i64, c: i64| (Monomial::new(vec![e]), c);
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        Laurent::from_terms(1, [t(1, self.entries[i][j]), t(0, -self.entries[j][i])])
                            .expect("univariate")
                    })
                    .collect()
            })
            .collect()
    }
}

fn degree_gate_for(degree: &BigUint, n: usize) -> Result<bool> {
    if n < 1 {
        return Err(Error::InvalidArgument(
            "solvability level must be at least 1".into(),
        ));
    }
    let two = BigUint::from(2u8);
    Ok(*degree > two || (n == 1 && *degree >= two))
}

fn arf_from_residue(delta_at_minus_one: &BigInt) -> u8 {
    let r = delta_at_minus_one.mod_floor(&BigInt::from(8));
    if r == BigInt::from(1) || r == BigInt::from(7) {
        0
    } else {
        1
    }
}

impl fmt::Display for SeifertMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{row:?}")?;
        }
        write!(f, "]")
    }
}

/// The Alexander polynomial normalised to lowest degree 0 and positive
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlexanderPolynomial {
    poly: IntPoly,
}

impl AlexanderPolynomial {
    pub fn normalize(p: &IntPoly) -> Self {
        let mut q = p.strip_low_zeros();
        if q.leading().is_some_and(|c| c.is_negative()) {
            q = q.neg();
        }
        AlexanderPolynomial { poly: q }
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn coefficients(&self) -> &[BigInt] {
        self.poly.coeffs()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.poly.eval(t)
    }

    pub fn mul(&self, other: &Self) -> Self {
        AlexanderPolynomial::normalize(&self.poly.mul(&other.poly))
    }
}

impl fmt::Display for AlexanderPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// A block-diagonal Seifert matrix kept as distinct blocks with
/// multiplicities, so sums of very many copies stay cheap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSum {
    summands: Vec<(SeifertMatrix, BigUint)>,
}

impl BlockSum {
    pub fn empty() -> Self {
        BlockSum {
            summands: Vec::new(),
        }
    }

    pub fn from_matrix(v: &SeifertMatrix) -> Self {
        let mut s = Self::empty();
        for b in v.blocks() {
            s.push(b, BigUint::one());
        }
        s
    }

    /// `copies` copies of `v` under connected sum.
    pub fn repeated(v: &SeifertMatrix, copies: BigUint) -> Self {
        let mut s = Self::empty();
        if copies.is_zero() {
            return s;
        }
        for b in v.blocks() {
            s.push(b, copies.clone());
        }
        s
    }

    /// Add `copies` of an indecomposable block, merging equal blocks.
    fn push(&mut self, block: SeifertMatrix, copies: BigUint) {
        if block.size() == 0 || copies.is_zero() {
            return;
        }
        match self.summands.iter_mut().find(|(b, _)| *b == block) {
            Some((_, c)) => *c += copies,
            None => self.summands.push((block, copies)),
        }
    }

    pub fn connected_sum(&self, other: &BlockSum) -> BlockSum {
        let mut s = self.clone();
        for (b, c) in &other.summands {
            s.push(b.clone(), c.clone());
        }
        s
    }

    pub fn mirror_reverse(&self) -> BlockSum {
        BlockSum {
            summands: self
                .summands
                .iter()
                .map(|(b, c)| (b.mirror_reverse(), c.clone()))
                .collect(),
        }
    }

    pub fn summands(&self) -> &[(SeifertMatrix, BigUint)] {
        &self.summands
    }

    pub fn genus(&self) -> BigUint {
        self.summands
            .iter()
            .map(|(b, c)| BigUint::from(b.genus()) * c)
            .sum()
    }

    pub fn alexander_degree(&self) -> BigUint {
        self.summands
            .iter()
            .map(|(b, c)| BigUint::from(b.alexander().degree()) * c)
            .sum()
    }

    /// The Alexander polynomial when the total multiplicity is small
    /// enough to expand.
    pub fn alexander(&self) -> Result<AlexanderPolynomial> {
        let mut acc = IntPoly::one();
        for (b, c) in &self.summands {
            let e = c
                .to_u32()
                .filter(|e| *e <= 4096)
                .ok_or_else(|| Error::InvalidArgument(format!("{c} copies is too many to expand")))?;
            acc = acc.mul(&b.alexander().poly.pow(e));
        }
        Ok(AlexanderPolynomial::normalize(&acc))
    }

    pub fn degree_gate(&self, n: usize) -> Result<bool> {
        degree_gate_for(&self.alexander_degree(), n)
    }

    /// Arf invariant from `Δ(-1) mod 8`, computed blockwise.
    pub fn arf(&self) -> u8 {
        let eight = BigInt::from(8);
        let mut r = BigInt::one();
        for (b, c) in &self.summands {
            let base = b.alexander().eval(&BigInt::from(-1)).mod_floor(&eight);
            r = (r * base.modpow(&BigInt::from(c.clone()), &eight)).mod_floor(&eight);
        }
        arf_from_residue(&r)
    }

    /// The full matrix, when it is small enough to write out.
    pub fn to_matrix(&self, max_size: usize) -> Option<SeifertMatrix> {
        let mut v = SeifertMatrix::unknot();
        for (b, c) in &self.summands {
            let c = c.to_usize()?;
            if v.size() + c.checked_mul(b.size())? > max_size {
                return None;
            }
            for _ in 0..c {
                v = v.connected_sum(b);
            }
        }
        Some(v)
    }
}
