#![allow(dead_code)]

use concord::knot::SeifertMatrix;
use concord::ring::FreeGroupRing;
use concord::words::Word;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A reduced word of at most `max_len` letters.
pub fn random_word(rng: &mut impl Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<(usize, i64)> = (0..len)
        .map(|_| (rng.gen_range(1..=rank), if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    Word::reduce(rank, letters).expect("generators in range")
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

/// A random unimodular matrix: a short product of elementary row moves.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, moves: usize) -> Vec<Vec<i64>> {
    let mut p: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..moves {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let c = rng.gen_range(-1..=1);
        for k in 0..n {
            p[i][k] += c * p[j][k];
        }
    }
    p
}

/// A random Seifert matrix of genus `g`: `Pᵀ (S + N) P` with `S` symmetric,
/// `N` a sum of `[[0,1],[0,0]]` blocks and `P` unimodular, so that
/// `V - Vᵀ = Pᵀ (N - Nᵀ) P` has determinant one.
pub fn random_seifert(rng: &mut impl Rng, genus: usize) -> SeifertMatrix {
    let n = 2 * genus;
    let mut v = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let s = rng.gen_range(-2..=2);
            v[i][j] = s;
            v[j][i] = s;
        }
    }
    for b in 0..genus {
        v[2 * b][2 * b + 1] += 1;
    }
    let p = random_unimodular(rng, n, 2 * n);
    let v = mat_mul(&mat_mul(&transpose(&p), &v), &p);
    SeifertMatrix::new(v).expect("unimodular by construction")
}

/// Letters of `w^{±1}` spelled out, without any reduction.
pub fn spell(w: &Word, inverse: bool) -> Vec<(usize, i64)> {
    let letters: Vec<(usize, i64)> = w.letters().collect();
    if inverse {
        letters.into_iter().rev().map(|(g, e)| (g, -e)).collect()
    } else {
        letters
    }
}

/// `∂_i` of an unreduced letter sequence, straight from
/// `∂(P x) = ∂P + ∂(x) P^{-1}` and `∂(x^{-1}) = -∂(x) x`.
pub fn naive_fox(rank: usize, letters: &[(usize, i64)], i: usize) -> FreeGroupRing {
    let mut prefix: Vec<(usize, i64)> = Vec::new();
    let mut terms = Vec::new();
    for &(g, e) in letters {
        if g == i {
            let p_inv = Word::reduce(rank, prefix.clone()).unwrap().inverse();
            if e > 0 {
                terms.push((p_inv, 1));
            } else {
                let x = Word::generator(rank, i).unwrap();
                terms.push((x.concat(&p_inv).unwrap(), -1));
            }
        }
        prefix.push((g, e));
    }
    FreeGroupRing::from_terms(rank, terms).unwrap()
}

/// `d_i` of an unreduced letter sequence, from `d(P x) = dP + P d(x)` and
/// `d(x^{-1}) = -x^{-1} d(x)`.
pub fn naive_fox_classical(rank: usize, letters: &[(usize, i64)], i: usize) -> FreeGroupRing {
    let mut prefix: Vec<(usize, i64)> = Vec::new();
    let mut terms = Vec::new();
    for &(g, e) in letters {
        if g == i {
            if e > 0 {
                terms.push((Word::reduce(rank, prefix.clone()).unwrap(), 1));
            } else {
                let mut p = prefix.clone();
                p.push((i, -1));
                terms.push((Word::reduce(rank, p).unwrap(), -1));
            }
        }
        prefix.push((g, e));
    }
    FreeGroupRing::from_terms(rank, terms).unwrap()
}

pub fn el(rank: usize, terms: Vec<(Word, i64)>) -> FreeGroupRing {
    FreeGroupRing::from_terms(rank, terms).unwrap()
}

pub fn mul(a: &FreeGroupRing, b: &FreeGroupRing) -> FreeGroupRing {
    a.try_mul(b).unwrap()
}

pub fn wmul(words: &[&Word]) -> Word {
    let mut acc = Word::identity(words[0].rank());
    for w in words {
        acc = acc.concat(w).unwrap();
    }
    acc
}

/// Coefficients (low first) of `det(tV - Vᵀ)` by the Leibniz expansion.
pub fn leibniz_alexander(v: &[Vec<i64>]) -> Vec<i128> {
    let n = v.len();
    let mut total = vec![0i128; n + 1];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1i128;
    // Heap's algorithm
    let mut visit = |perm: &[usize], sign: i128| {
        let mut poly = vec![0i128; n + 1];
        poly[0] = sign;
        for (i, &j) in perm.iter().enumerate() {
            let (a, b) = (i128::from(v[i][j]), -i128::from(v[j][i]));
            let mut next = vec![0i128; n + 1];
            for d in 0..n {
                next[d + 1] += poly[d] * a;
                next[d] += poly[d] * b;
            }
            poly = next;
        }
        for d in 0..=n {
            total[d] += poly[d];
        }
    };
    visit(&perm, sign);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            visit(&perm, sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    total
}

/// Strip powers of `t` and make the leading coefficient positive.
pub fn normalize_poly(mut p: Vec<i128>) -> Vec<i128> {
    while p.last() == Some(&0) {
        p.pop();
    }
    let low = p.iter().position(|&c| c != 0).unwrap_or(0);
    p.drain(..low);
    if p.last().is_some_and(|&c| c < 0) {
        for c in &mut p {
            *c = -*c;
        }
    }
    p
}

/// The Arf invariant as the majority value of `q(x) = xᵀ V x mod 2`.
pub fn arf_by_majority(v: &[Vec<i64>]) -> u8 {
    let n = v.len();
    let mut ones = 0usize;
    for mask in 0u32..(1 << n) {
        let mut q = 0i64;
        for i in 0..n {
            for j in 0..n {
                if mask >> i & 1 == 1 && mask >> j & 1 == 1 {
                    q += v[i][j];
                }
            }
        }
        ones += (q.rem_euclid(2)) as usize;
    }
    u8::from(2 * ones > 1 << n)
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Floating-point signature of `(1 - ω)V + (1 - ω̄)Vᵀ` at `ω = e^{iπτ}`;
/// `None` when an eigenvalue is too close to zero to call.
pub fn float_signature(v: &[Vec<i64>], tau: f64) -> Option<i64> {
    let n = v.len();
    let (re, im) = ((std::f64::consts::PI * tau).cos(), (std::f64::consts::PI * tau).sin());
    let mut real = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let a = (1.0 - re) * (v[i][j] + v[j][i]) as f64;
            let b = -im * (v[i][j] - v[j][i]) as f64;
            real[i][j] = a;
            real[i + n][j + n] = a;
            real[i][j + n] = -b;
            real[i + n][j] = b;
        }
    }
    let eig = jacobi_eigenvalues(real);
    if eig.iter().any(|e| e.abs() < 1e-7) {
        return None;
    }
    let pos = eig.iter().filter(|&&e| e > 0.0).count() as i64;
    let neg = eig.len() as i64 - pos;
    Some((pos - neg) / 2)
}
