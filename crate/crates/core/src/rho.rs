//! Levine–Tristram signatures and the abelian ρ-invariant.
//!
//! Angles are measured in turns of π: `ω = e^{iπτ}`, so the upper half
//! circle is `0 <= τ <= 1`. The signature function is constant between
//! roots of `Δ` on the circle; the profile locates those roots exactly
//! (roots of unity, via cyclotomic factors) or in certified rational
//! intervals, and samples one rational point of each arc.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::certified::{acos_turns, circle_point, trace_sample};
use crate::error::{Error, Result};
use crate::knot::{BlockSum, SeifertMatrix};
use crate::matrix::inertia;
use crate::poly::{cyclotomic, cyclotomic_factors, isolate_real_roots, trace_polynomial, IntPoly, RootInterval, SturmSequence};

/// A point of the unit circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CirclePoint {
    /// `e^{iπτ}` for rational `τ`.
    Angle(BigRational),
    /// `re + i·im` with rational coordinates on the circle.
    Rational { re: BigRational, im: BigRational },
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Signature of `(1 - ω)V + (1 - ω̄)Vᵀ` at a rational point `ω = re + i·im`
/// of the circle. Errors with `AtJump` when the form is singular.
pub fn signature_at_rational(v: &SeifertMatrix, re: &BigRational, im: &BigRational) -> Result<i64> {
    if re * re + im * im != BigRational::one() {
        return Err(Error::OffCircle(format!("{re} + {im}i")));
    }
    if re.is_one() {
        return Ok(0);
    }
    // the form is (1 - re)(V + Vᵀ) - i·im(V - Vᵀ); clear denominators
    let a = BigRational::one() - re;
    let b = im.clone();
    let l = a.denom().lcm(b.denom());
    let a = (&a * BigRational::from_integer(l.clone())).to_integer();
    let b = (&b * BigRational::from_integer(l)).to_integer();
    let s = v.symmetric();
    let anti = v.antisymmetric();
    let n = v.size();
    // real form [[R, -I], [I, R]] of R + iI with R = aS, I = -bA
    let mut m = vec![vec![BigInt::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let r = &a * &s[i][j];
            let im_part = -(&b * &anti[i][j]);
            m[i][j] = r.clone();
            m[n + i][n + j] = r;
            m[i][n + j] = -im_part.clone();
            m[n + i][j] = im_part;
        }
    }
    let (p, q, z) = inertia(&m);
    if z > 0 {
        return Err(Error::AtJump(format!(
            "the form is singular at {re} + {im}i, a root of the Alexander polynomial"
        )));
    }
    Ok((p as i64 - q as i64) / 2)
}

/// A certified angle: exact, or known to lie in an open interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Angle {
    Exact(BigRational),
    Interval(BigRational, BigRational),
}

impl Angle {
    pub fn is_exact(&self) -> bool {
        matches!(self, Angle::Exact(_))
    }

    pub fn bounds(&self) -> (BigRational, BigRational) {
        match self {
            Angle::Exact(t) => (t.clone(), t.clone()),
            Angle::Interval(lo, hi) => (lo.clone(), hi.clone()),
        }
    }

    fn map_affine(&self, sign: i64, shift: i64) -> Angle {
        let f = |x: &BigRational| rat(shift) + rat(sign) * x;
        match self {
            Angle::Exact(t) => Angle::Exact(f(t)),
            Angle::Interval(lo, hi) => {
                let (a, b) = (f(lo), f(hi));
                Angle::Interval(a.clone().min(b.clone()), a.max(b))
            }
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Exact(t) => write!(f, "{t}"),
            Angle::Interval(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

/// A root of `Δ` in the open upper half circle.
#[derive(Clone, Debug)]
pub struct Jump {
    /// Isolating interval of the trace `s = ω + ω̄ = 2cos(πτ)`.
    trace: RootInterval,
    angle: Angle,
    /// Order of the root of unity, when the root is one.
    order: Option<u64>,
}

impl Jump {
    pub fn angle(&self) -> &Angle {
        &self.angle
    }

    pub fn root_of_unity_order(&self) -> Option<u64> {
        self.order
    }
}

/// One arc of the circle with the constant signature on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub start: Angle,
    pub end: Angle,
    pub value: BigInt,
}

/// The piecewise-constant signature function of a Seifert form.
#[derive(Clone, Debug)]
pub struct SignatureProfile {
    trace_poly: IntPoly,
    jumps: Vec<Jump>,
    /// `values[j]` holds on the arc between jump `j - 1` and jump `j`,
    /// counting up from `τ = 0`.
    values: Vec<BigInt>,
}

/// The exact or certified value of ρ_Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RhoValue {
    Exact(BigRational),
    Interval { lo: BigRational, hi: BigRational },
}

impl RhoValue {
    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            RhoValue::Exact(r) => Some(r),
            RhoValue::Interval { .. } => None,
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        match self {
            RhoValue::Exact(r) => r == x,
            RhoValue::Interval { lo, hi } => lo <= x && x <= hi,
        }
    }

    pub fn midpoint(&self) -> BigRational {
        match self {
            RhoValue::Exact(r) => r.clone(),
            RhoValue::Interval { lo, hi } => (lo + hi) / rat(2),
        }
    }
}

impl fmt::Display for RhoValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhoValue::Exact(r) => write!(f, "{r}"),
            RhoValue::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

fn block_sum_signature(sum: &BlockSum, re: &BigRational, im: &BigRational) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for (b, c) in sum.summands() {
        total += BigInt::from(signature_at_rational(b, re, im)?) * BigInt::from(c.clone());
    }
    Ok(total)
}

/// Order `q` of the root of unity `e^{iπ a/b}`.
fn root_order(tau: &BigRational) -> u64 {
    let a = tau.numer().clone();
    let b2 = tau.denom() * BigInt::from(2);
    let g = a.gcd(&b2);
    u64::try_from(b2 / g).expect("order fits in u64")
}

/// Angles `2k/q` in `(0, 1)` of the primitive `q`-th roots of unity.
fn primitive_angles(q: u64) -> Vec<BigRational> {
    (1..q)
        .filter(|&k| 2 * k < q && k.gcd(&q) == 1)
        .map(|k| BigRational::new(BigInt::from(2 * k), BigInt::from(q)))
        .collect()
}

impl SignatureProfile {
    pub fn of_matrix(v: &SeifertMatrix) -> Result<Self> {
        Self::of_sum(&BlockSum::from_matrix(v))
    }

    pub fn of_sum(sum: &BlockSum) -> Result<Self> {
        let mut f = IntPoly::one();
        for (b, _) in sum.summands() {
            f = f.mul(b.alexander().poly());
        }
        let f = f.squarefree_part();
        let orders: Vec<u64> = cyclotomic_factors(&f).into_iter().map(|(q, _)| q).collect();
        let cyc = orders.iter().fold(IntPoly::one(), |acc, &q| acc.mul(&cyclotomic(q)));
        let two = rat(2);
        let (jumps, trace_poly) = if f.degree().unwrap_or(0) == 0 {
            (Vec::new(), IntPoly::one())
        } else {
            let p = trace_polynomial(&f).ok_or_else(|| {
                Error::InvalidSeifert(format!("Alexander polynomial {f} is not symmetric"))
            })?;
            let pc = trace_polynomial(&cyc).unwrap_or_else(IntPoly::one);
            let sturm_c = SturmSequence::new(&pc);
            let mut roots = isolate_real_roots(&p, &-two.clone(), &two);
            separate(&mut roots, &p);
            // descending trace is ascending angle
            roots.reverse();
            let mut exact: Vec<(BigRational, u64)> = orders
                .iter()
                .flat_map(|&q| primitive_angles(q).into_iter().map(move |t| (t, q)))
                .collect();
            exact.sort();
            let mut exact = exact.into_iter();
            let mut jumps = Vec::with_capacity(roots.len());
            for r in roots {
                let cyclotomic_root = if r.is_exact() {
                    pc.sign_at(&r.lo) == 0
                } else {
                    pc.degree().unwrap_or(0) > 0 && sturm_c.count(&r.lo, &r.hi) == 1
                };
                if cyclotomic_root {
                    let (tau, q) = exact.next().expect("one exact angle per cyclotomic root");
                    jumps.push(Jump {
                        trace: r,
                        angle: Angle::Exact(tau),
                        order: Some(q),
                    });
                } else {
                    let mut j = Jump {
                        trace: r,
                        angle: Angle::Interval(BigRational::zero(), BigRational::one()),
                        order: None,
                    };
                    j.refresh_angle(&(rat(1) / rat(1 << 20)));
                    jumps.push(j);
                }
            }
            debug_assert!(exact.next().is_none());
            (jumps, p)
        };
        let values = sample_values(sum, &jumps)?;
        Ok(SignatureProfile {
            trace_poly,
            jumps,
            values,
        })
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    /// Signature values on the upper half circle, from `τ = 0` up.
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// Arcs of the full circle, starting with the arc through `ω = 1`, with
    /// equal neighbours merged.
    pub fn arcs(&self) -> Vec<Arc> {
        let m = self.jumps.len();
        if m == 0 {
            return vec![Arc {
                start: Angle::Exact(rat(0)),
                end: Angle::Exact(rat(2)),
                value: self.values[0].clone(),
            }];
        }
        let tau = |j: usize| self.jumps[j].angle.clone();
        let mut arcs = vec![Arc {
            start: tau(0).map_affine(-1, 0),
            end: tau(0),
            value: self.values[0].clone(),
        }];
        for j in 1..m {
            arcs.push(Arc {
                start: tau(j - 1),
                end: tau(j),
                value: self.values[j].clone(),
            });
        }
        arcs.push(Arc {
            start: tau(m - 1),
            end: tau(m - 1).map_affine(-1, 2),
            value: self.values[m].clone(),
        });
        for j in (1..m).rev() {
            arcs.push(Arc {
                start: tau(j).map_affine(-1, 2),
                end: tau(j - 1).map_affine(-1, 2),
                value: self.values[j].clone(),
            });
        }
        let mut merged: Vec<Arc> = Vec::new();
        for a in arcs {
            match merged.last_mut() {
                Some(last) if last.value == a.value => last.end = a.end,
                _ => merged.push(a),
            }
        }
        if merged.len() > 1 && merged[0].value == merged[merged.len() - 1].value {
            let last = merged.pop().expect("nonempty");
            merged[0].start = last.start.map_affine(1, -2);
        }
        if merged.len() == 1 {
            merged[0].start = Angle::Exact(rat(0));
            merged[0].end = Angle::Exact(rat(2));
        }
        merged
    }

    /// `∫ σ` over the circle with total mass 1, as an exact rational when
    /// every jump that changes the value is a root of unity, otherwise an
    /// interval of width at most `tolerance`.
    pub fn rho(&mut self, tolerance: &BigRational) -> Result<RhoValue> {
        if !tolerance.is_positive() {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        let m = self.jumps.len();
        let deltas: Vec<BigInt> = (0..m).map(|j| &self.values[j] - &self.values[j + 1]).collect();
        let loose: Vec<usize> = (0..m)
            .filter(|&j| !deltas[j].is_zero() && !self.jumps[j].angle.is_exact())
            .collect();
        if !loose.is_empty() {
            let k = rat(loose.len() as i64);
            for &j in &loose {
                let target = tolerance / (&k * BigRational::from_integer(deltas[j].abs()));
                while {
                    let (lo, hi) = self.jumps[j].angle.bounds();
                    hi - lo > target
                } {
                    let p = self.trace_poly.clone();
                    self.jumps[j].refine(&p, &target);
                }
            }
        }
        // ∫_0^1 σ dτ = v_m + Σ τ_j (v_{j-1} - v_j)
        let base = BigRational::from_integer(self.values[m].clone());
        let mut lo = base.clone();
        let mut hi = base;
        for j in 0..m {
            let d = BigRational::from_integer(deltas[j].clone());
            let (a, b) = self.jumps[j].angle.bounds();
            let (x, y) = (&a * &d, &b * &d);
            lo += x.clone().min(y.clone());
            hi += x.max(y);
        }
        Ok(if lo == hi {
            RhoValue::Exact(lo)
        } else {
            RhoValue::Interval { lo, hi }
        })
    }

    /// Value at `e^{iπτ}`, for `τ` not at a jump.
    fn value_at_angle(&mut self, tau: &BigRational) -> Result<BigInt> {
        let mut below = 0;
        for j in 0..self.jumps.len() {
            loop {
                let (lo, hi) = self.jumps[j].angle.bounds();
                if *tau == lo && self.jumps[j].angle.is_exact() {
                    return Err(Error::AtJump(format!("angle {tau}π is a root of the Alexander polynomial")));
                }
                if hi < *tau {
                    below += 1;
                    break;
                }
                if lo > *tau {
                    break;
                }
                let w = (&hi - &lo) / rat(4);
                let p = self.trace_poly.clone();
                self.jumps[j].refine(&p, &w);
            }
        }
        Ok(self.values[below].clone())
    }
}

impl Jump {
    fn refresh_angle(&mut self, width: &BigRational) {
        let two = rat(2);
        let lo = acos_turns(&(&self.trace.hi / &two), width).0;
        let hi = acos_turns(&(&self.trace.lo / &two), width).1;
        self.angle = Angle::Interval(lo, hi);
    }

    fn refine(&mut self, p: &IntPoly, target: &BigRational) {
        for _ in 0..4 {
            self.trace.refine(p);
        }
        self.refresh_angle(&(target / rat(4)));
    }
}

/// Refine isolating intervals until neighbours, and the ends `±2`, are
/// strictly apart, so every gap has room for a sample point.
fn separate(roots: &mut [RootInterval], p: &IntPoly) {
    let two = rat(2);
    loop {
        let mut touched = false;
        if let Some(r) = roots.first_mut() {
            if r.lo <= -two.clone() {
                touched = true;
                r.refine(p);
            }
        }
        if let Some(r) = roots.last_mut() {
            if r.hi >= two {
                touched = true;
                r.refine(p);
            }
        }
        for j in 1..roots.len() {
            if roots[j - 1].hi >= roots[j].lo {
                touched = true;
                roots[j - 1].refine(p);
                roots[j].refine(p);
            }
        }
        if !touched {
            return;
        }
    }
}

fn sample_values(sum: &BlockSum, jumps: &[Jump]) -> Result<Vec<BigInt>> {
    let two = rat(2);
    let mut values = Vec::with_capacity(jumps.len() + 1);
    // arcs in increasing angle are gaps in decreasing trace
    let mut upper = two.clone();
    for j in jumps {
        let u = trace_sample(&j.trace.hi, &upper);
        let (re, im) = circle_point(&u);
        values.push(block_sum_signature(sum, &re, &im)?);
        upper = j.trace.lo.clone();
    }
    values.push(block_sum_signature(sum, &-BigRational::one(), &BigRational::zero())?);
    Ok(values)
}

/// Signature at a point of the circle, for a single Seifert matrix.
pub fn levine_tristram(v: &SeifertMatrix, point: &CirclePoint) -> Result<i64> {
    let s = levine_tristram_sum(&BlockSum::from_matrix(v), point)?;
    Ok(i64::try_from(s).expect("bounded by the size of V"))
}

/// Signature at a point of the circle for a block sum.
pub fn levine_tristram_sum(sum: &BlockSum, point: &CirclePoint) -> Result<BigInt> {
    match point {
        CirclePoint::Rational { re, im } => block_sum_signature(sum, re, im),
        CirclePoint::Angle(tau) => {
            let mut t = tau - rat(2) * (tau / rat(2)).floor();
            if t > rat(1) {
                t = rat(2) - t;
            }
            if t.is_zero() {
                return Ok(BigInt::zero());
            }
            if t.is_one() {
                return block_sum_signature(sum, &-BigRational::one(), &BigRational::zero());
            }
            let q = root_order(&t);
            let phi = cyclotomic(q);
            for (b, _) in sum.summands() {
                if b.alexander().poly().div_exact(&phi).is_some() {
                    return Err(Error::AtJump(format!(
                        "angle {tau}π is a root of the Alexander polynomial"
                    )));
                }
            }
            SignatureProfile::of_sum(sum)?.value_at_angle(&t)
        }
    }
}

pub fn signature_profile(v: &SeifertMatrix) -> Result<SignatureProfile> {
    SignatureProfile::of_matrix(v)
}

/// ρ_Z of the knot with Seifert matrix `v`.
pub fn rho_z(v: &SeifertMatrix, tolerance: &BigRational) -> Result<RhoValue> {
    SignatureProfile::of_matrix(v)?.rho(tolerance)
}

pub fn rho_z_sum(sum: &BlockSum, tolerance: &BigRational) -> Result<RhoValue> {
    SignatureProfile::of_sum(sum)?.rho(tolerance)
}
