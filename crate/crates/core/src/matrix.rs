//! Exact linear algebra over `Z` and over commutative Laurent rings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::ring::Laurent;

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn to_big(m: &[Vec<i64>]) -> IntMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| (0..n).map(|i| m[i][j].clone()).collect())
        .collect()
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// The integer polynomial of degree below `values.len()` taking the given
/// values at `x = 0, 1, 2, ...`.
pub fn interpolate(values: &[BigInt]) -> IntPoly {
    // Newton divided differences on equally spaced nodes
    let n = values.len();
    let mut diff: Vec<BigRational> = values
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect();
    for level in 1..n {
        for i in (level..n).rev() {
            diff[i] = (&diff[i] - &diff[i - 1]) / BigRational::from_integer(BigInt::from(level));
        }
    }
    // expand Σ diff[k] Π_{j<k} (x - j), Horner style from the top
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); n.max(1)];
    for k in (0..n).rev() {
        // acc = acc * (x - k) + diff[k]
        let mut next = vec![BigRational::zero(); n.max(1)];
        for (d, c) in acc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if d + 1 < next.len() {
                next[d + 1] += c;
            }
            next[d] -= c * BigRational::from_integer(BigInt::from(k));
        }
        next[0] += &diff[k];
        acc = next;
    }
    IntPoly::new(
        acc.into_iter()
            .map(|c| {
                assert!(c.is_integer(), "interpolant must be integral");
                c.to_integer()
            })
            .collect(),
    )
}

/// `det(x A - B)` as a polynomial in `x`.
pub fn pencil_determinant(a: &IntMatrix, b: &IntMatrix) -> IntPoly {
    let n = a.len();
    let values: Vec<BigInt> = (0..=n)
        .map(|x| {
            let x = BigInt::from(x);
            let m: IntMatrix = a
                .iter()
                .zip(b)
                .map(|(ra, rb)| ra.iter().zip(rb).map(|(p, q)| &x * p - q).collect())
                .collect();
            determinant(&m)
        })
        .collect();
    interpolate(&values)
}

/// The characteristic polynomial `det(x I - A)`.
pub fn charpoly(a: &IntMatrix) -> IntPoly {
    let n = a.len();
    let id: IntMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    pencil_determinant(&id, a)
}

/// Inertia `(positive, negative, zero)` of a real symmetric matrix, by exact
/// diagonalization under congruence.
pub fn inertia(a: &IntMatrix) -> (usize, usize, usize) {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        let pivot = match (k..n).find(|&i| !m[i][i].is_zero()) {
            Some(i) => i,
            None => {
                let Some((i, j)) = (k..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !m[i][j].is_zero())
                else {
                    return (pos, neg, n - k);
                };
                // x_i -> x_i + x_j makes the diagonal entry 2 m_ij
                for c in k..n {
                    let v = m[j][c].clone();
                    m[i][c] += v;
                }
                for r in k..n {
                    let v = m[r][j].clone();
                    m[r][i] += v;
                }
                i
            }
        };
        m.swap(k, pivot);
        for row in m.iter_mut() {
            row.swap(k, pivot);
        }
        let p = m[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &p;
            for j in k + 1..n {
                let d = &f * &m[k][j];
                m[i][j] -= d;
            }
        }
        for i in k + 1..n {
            m[i][k] = BigRational::zero();
            m[k][i] = BigRational::zero();
        }
    }
    (pos, neg, 0)
}

pub fn signature(a: &IntMatrix) -> i64 {
    let (p, n, _) = inertia(a);
    p as i64 - n as i64
}

/// Determinant of a square matrix over a commutative Laurent ring, by
/// expansion along rows with memoisation over used-column sets.
pub fn laurent_determinant(m: &[Vec<Laurent>], dim: usize) -> Result<Laurent> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("matrix is not square".into()));
    }
    if n > 20 {
        return Err(Error::InvalidArgument(
            "Laurent determinant limited to 20x20".into(),
        ));
    }
    for row in m {
        for e in row {
            if e.base() != dim {
                return Err(Error::BaseMismatch(format!("{} vs {dim}", e.base())));
            }
        }
    }
    let mut dp: Vec<Laurent> = vec![Laurent::zero(dim); 1 << n];
    dp[0] = Laurent::one(dim);
    for mask in 0usize..(1 << n) {
        if dp[mask].is_zero() {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 || m[row][col].is_zero() {
                continue;
            }
            // sign of placing `col` after the columns already used
            let above = (mask >> col).count_ones();
            let term = dp[mask].try_mul(&m[row][col])?;
            let term = if above % 2 == 1 { term.neg() } else { term };
            let next = mask | (1 << col);
            dp[next] = dp[next].try_add(&term)?;
        }
    }
    Ok(dp[(1 << n) - 1].clone())
}

/// Is the Laurent polynomial a unit `±t^a`?
pub fn is_unit(l: &Laurent) -> bool {
    l.len() == 1 && l.terms().all(|(_, c)| c == 1 || c == -1)
}

/// Univariate Laurent polynomial as an integer polynomial, shifted so the
/// lowest exponent is zero.
pub fn laurent_to_poly(l: &Laurent) -> Result<IntPoly> {
    if l.base() != 1 {
        return Err(Error::InvalidArgument("expected a univariate Laurent polynomial".into()));
    }
    let low = l.terms().map(|(m, _)| m.exponents()[0]).min().unwrap_or(0);
    let high = l.terms().map(|(m, _)| m.exponents()[0]).max().unwrap_or(0);
    let mut c = vec![BigInt::zero(); (high - low + 1) as usize];
    for (m, k) in l.terms() {
        c[(m.exponents()[0] - low) as usize] = BigInt::from(k);
    }
    Ok(IntPoly::new(c))
}
