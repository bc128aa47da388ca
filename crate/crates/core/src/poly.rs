//! Dense univariate integer polynomials with the exact tools the knot and
//! signature code needs: gcd and square-free parts, cyclotomic factors, the
//! trace substitution `s = t + 1/t`, Sturm sequences and real-root
//! isolation with rational intervals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer polynomial, coefficients stored from the constant term upward
/// with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `t^k`
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        IntPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `p(t^k)`
    pub fn compose_power(&self, k: usize) -> Self {
        let mut c = vec![BigInt::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Self::new(c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Sign of `p(x)` for rational `x`, computed by homogenising with the
    /// denominator so no rational arithmetic is needed.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        let (p, q) = (x.numer(), x.denom());
        let n = self.coeffs.len();
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        // Σ c_i p^i q^{n-1-i}, evaluated by Horner from the top
        let mut ppow_terms = Vec::with_capacity(n);
        let mut ppow = BigInt::one();
        for _ in 0..n {
            ppow_terms.push(ppow.clone());
            ppow *= p;
        }
        for i in (0..n).rev() {
            acc += &self.coeffs[i] * &ppow_terms[i] * &qpow;
            qpow *= q;
        }
        sign_of(&acc)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide by the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().expect("nonzero").is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Exact quotient over `Z`, or `None` when `divisor` does not divide.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_over_z(divisor)?;
        r.is_zero().then_some(q)
    }

    /// Long division that stays in `Z[t]`; `None` when a quotient
    /// coefficient would not be integral.
    fn div_rem_over_z(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lead = divisor.leading().expect("nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * d;
            }
            quot[k] = q;
        }
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Pseudo-remainder `lc(b)^k a mod b`, returned with the exponent `k`.
    fn pseudo_rem(&self, b: &Self) -> (Self, u32) {
        let db = b.degree().expect("nonzero divisor");
        let lead = b.leading().expect("nonzero").clone();
        let mut r = self.clone();
        let mut k = 0;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let shift = dr - db;
            let top = r.leading().expect("nonzero").clone();
            let scaled = r.scale(&lead);
            let mut sub = vec![BigInt::zero(); shift];
            sub.extend(b.coeffs.iter().map(|c| c * &top));
            r = scaled.sub(&IntPoly::new(sub));
            k += 1;
        }
        (r, k)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (r, _) = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive() };
        }
        a.primitive()
    }

    /// Product of the distinct irreducible factors, primitive.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        let p = self.primitive();
        let mut q = p
            .div_exact(&g)
            .or_else(|| p.scale(g.leading().expect("nonzero")).div_exact(&g))
            .expect("gcd divides");
        q = q.primitive();
        q
    }

    /// Strip powers of `t` dividing the polynomial.
    pub fn strip_low_zeros(&self) -> Self {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        Self::new(self.coeffs[k..].to_vec())
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }
}

pub(crate) fn sign_of(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

/// The cyclotomic polynomial `Φ_n`.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1);
    // Φ_{mp}(t) = Φ_m(t^p) / Φ_m(t) for p ∤ m, then Φ_n(t) = Φ_rad(n)(t^{n/rad(n)})
    let primes = prime_factors(n);
    let mut phi = IntPoly::from_i64(&[-1, 1]);
    let mut rad = 1u64;
    for p in &primes {
        let lifted = phi.compose_power(*p as usize);
        phi = lifted.div_exact(&phi).expect("cyclotomic recursion divides");
        rad *= p;
    }
    phi.compose_power((n / rad) as usize)
}

/// Orders `q` and multiplicities of the cyclotomic factors `Φ_q` of `p`.
pub fn cyclotomic_factors(p: &IntPoly) -> Vec<(u64, u32)> {
    let d = p.degree().unwrap_or(0) as u64;
    let mut rest = p.clone();
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    // φ(q) >= sqrt(q/2), so φ(q) <= d forces q <= 2 d^2
    for q in 1..=(2 * d * d).max(2) {
        if euler_phi(q) > d {
            continue;
        }
        let phi = cyclotomic(q);
        let mut mult = 0;
        while let Some(next) = rest.div_exact(&phi) {
            rest = next;
            mult += 1;
        }
        if mult > 0 {
            out.push((q, mult));
        }
    }
    out
}

/// For a palindromic `f` of even degree `2d`, the polynomial `P` of degree
/// `d` with `f(t) = t^d P(t + 1/t)`.
pub fn trace_polynomial(f: &IntPoly) -> Option<IntPoly> {
    let n = f.degree()?;
    if n % 2 != 0 || !f.is_palindromic() {
        return None;
    }
    let d = n / 2;
    let c = f.coeffs();
    // D_0 = 2, D_1 = s, D_{k+1} = s D_k - D_{k-1} with D_k(t + 1/t) = t^k + t^{-k}
    let s = IntPoly::from_i64(&[0, 1]);
    let mut dickson = vec![IntPoly::from_i64(&[2]), s.clone()];
    for k in 2..=d {
        let next = s.mul(&dickson[k - 1]).sub(&dickson[k - 2]);
        dickson.push(next);
    }
    let mut p = IntPoly::new(vec![c[d].clone()]);
    for k in 1..=d {
        p = p.add(&dickson[k].scale(&c[d + k]));
    }
    Some(p)
}

/// Sturm sequence of a polynomial, kept primitive with sign-preserving
/// scalings.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<IntPoly>,
}

impl SturmSequence {
    pub fn new(p: &IntPoly) -> Self {
        let mut chain = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d);
        }
        while chain.len() >= 2 {
            let a = &chain[chain.len() - 2];
            let b = &chain[chain.len() - 1];
            let (mut r, k) = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            // prem = lc^k * rem; undo the sign of the multiplier
            let lead_negative = b.leading().expect("nonzero").is_negative();
            if !(lead_negative && k % 2 == 1) {
                r = r.neg();
            }
            let g = r.content();
            r = IntPoly::new(r.coeffs.iter().map(|c| c / &g).collect());
            chain.push(r);
        }
        SturmSequence { chain }
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in `(a, b]`; requires `p(a) != 0`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// A real root of a square-free polynomial: either known exactly
/// (`lo == hi`) or the unique root in the open interval `(lo, hi)` with
/// the polynomial nonzero at both ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Halve the interval, keeping the sign change.
    pub fn refine(&mut self, p: &IntPoly) {
        if self.is_exact() {
            return;
        }
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        let sm = p.sign_at(&mid);
        if sm == 0 {
            self.lo = mid.clone();
            self.hi = mid;
        } else if sm == p.sign_at(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }
}

/// Isolate the distinct real roots of the square-free `p` in the open
/// interval `(lo, hi)`, where `p(lo)` and `p(hi)` are nonzero. Intervals
/// come back in increasing order.
pub fn isolate_real_roots(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> Vec<RootInterval> {
    let sturm = SturmSequence::new(p);
    let two = BigRational::from_integer(2.into());
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        let n = sturm.count(&a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(RootInterval { lo: a, hi: b });
            continue;
        }
        let mid = (&a + &b) / &two;
        if p.sign_at(&mid) != 0 {
            stack.push((a, mid.clone()));
            stack.push((mid, b));
            continue;
        }
        // an exact rational root: carve out a neighbourhood holding only it
        let mut eps = (&b - &a) / BigRational::from_integer(4.into());
        loop {
            let l = &mid - &eps;
            let r = &mid + &eps;
            if p.sign_at(&l) != 0 && p.sign_at(&r) != 0 && sturm.count(&l, &r) == 1 {
                stack.push((a.clone(), l));
                stack.push((r, b.clone()));
                break;
            }
            eps /= &two;
        }
        out.push(RootInterval {
            lo: mid.clone(),
            hi: mid,
        });
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}
