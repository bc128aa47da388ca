//! Planning and checking the infection schedule for a family of knots
//! `K_0, K_1, ...` built from a base knot by infecting along `m` axes with
//! knots `J^i` whose ρ-invariants grow fast enough:
//!
//! `ρ(J^1) > 2 c_M` and `ρ(J^i) > 2 c_M + 2 m ρ(J^{i-1})`.
//!
//! The canonical choice takes `J^i` to be the connected sum of the least
//! even number of left-handed trefoils meeting the bound, so each `J^i` has
//! vanishing Arf invariant.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot::{BlockSum, SeifertMatrix};
use crate::rho::{rho_z, rho_z_sum, RhoValue};

/// Serde adapter writing values through `Display` and reading them back
/// through `FromStr`, so exact numbers travel as strings.
mod as_string {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let text = String::deserialize(d)?;
        text.parse().map_err(de::Error::custom)
    }
}

/// Parse `p`, `p/q` or a decimal such as `12.5` as an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse {
        text: text.to_string(),
        reason: "expected an integer, p/q, or a decimal".into(),
    };
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let whole: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let digits: BigInt = frac.parse().map_err(|_| bad())?;
        let value = BigRational::new(whole * &scale + digits, scale);
        return Ok(if negative { -value } else { value });
    }
    t.parse().map_err(|_| bad())
}

/// Binary weights `ε_k`, one per infection axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsilonVector(Vec<bool>);

impl EpsilonVector {
    pub fn new(bits: Vec<bool>) -> Self {
        EpsilonVector(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

impl FromStr for EpsilonVector {
    type Err = Error;

    /// Accepts `101` or `1,0,1`.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !matches!(c, ',' | ' '))
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse {
                    text: s.to_string(),
                    reason: "epsilon entries must be 0 or 1".into(),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EpsilonVector(bits))
    }
}

impl fmt::Display for EpsilonVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

/// The infection knot used at one step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Infection {
    /// Connected sum of `copies` left-handed trefoils.
    LeftTrefoilSum {
        #[serde(with = "as_string")]
        copies: BigUint,
    },
    /// An arbitrary Seifert matrix supplied by the caller.
    Matrix { matrix: SeifertMatrix },
}

impl Infection {
    fn block_sum(&self) -> BlockSum {
        match self {
            Infection::LeftTrefoilSum { copies } => {
                BlockSum::repeated(&SeifertMatrix::left_trefoil(), copies.clone())
            }
            Infection::Matrix { matrix } => BlockSum::from_matrix(matrix),
        }
    }

    pub fn copies(&self) -> Option<&BigUint> {
        match self {
            Infection::LeftTrefoilSum { copies } => Some(copies),
            Infection::Matrix { .. } => None,
        }
    }
}

/// One `J^i` with its inequality witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub i: usize,
    pub infection: Infection,
    #[serde(with = "as_string")]
    pub rho: BigRational,
    /// `2 c_M` for the first step, `2 c_M + 2 m ρ(J^{i-1})` after.
    #[serde(with = "as_string")]
    pub threshold: BigRational,
    /// `rho - threshold`, strictly positive.
    #[serde(with = "as_string")]
    pub margin: BigRational,
    pub arf: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyPlan {
    pub base: SeifertMatrix,
    /// Solvability level.
    pub n: usize,
    /// Number of infection axes.
    pub m: usize,
    #[serde(with = "as_string")]
    pub c_m: BigRational,
    pub schedule: Vec<Step>,
    #[serde(default)]
    pub annotations: Vec<String>,
}

fn check_inputs(base: &SeifertMatrix, n: usize, m: usize, c_m: &BigRational) -> Result<()> {
    if !c_m.is_positive() {
        return Err(Error::InvalidArgument("c_M must be positive".into()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("at least one infection axis is needed".into()));
    }
    if !base.degree_gate(n)? {
        let d = base.alexander().degree();
        let need = if n == 1 { "at least 2" } else { "greater than 2" };
        return Err(Error::Hypothesis(format!(
            "the base knot's Alexander polynomial has degree {d}; level {n} needs degree {need} \
             (the statement is false for n >= 2 with degree 2)"
        )));
    }
    Ok(())
}

fn threshold(c_m: &BigRational, m: usize, previous: Option<&BigRational>) -> BigRational {
    let two = BigRational::from_integer(2.into());
    let base = &two * c_m;
    match previous {
        None => base,
        Some(p) => base + &two * BigRational::from_integer(m.into()) * p,
    }
}

fn annotations() -> Vec<String> {
    vec![
        "infection knots are connected sums of left-handed trefoils; any knot with the same \
         rho-invariant may be substituted (e.g. for grope conclusions) without changing the certificates"
            .into(),
        "infection preserves the classical Seifert matrix of the base knot; this is recorded, not recomputed"
            .into(),
        "c_M is an input: the certificates hold for any Cheeger-Gromov bound not exceeding it".into(),
    ]
}

/// ρ of one left-handed trefoil, computed rather than assumed.
pub fn trefoil_unit() -> Result<BigRational> {
    let tol = BigRational::new(1.into(), BigInt::from(1u64 << 30));
    match rho_z(&SeifertMatrix::left_trefoil(), &tol)? {
        RhoValue::Exact(r) => Ok(r),
        RhoValue::Interval { .. } => Err(Error::Precision("trefoil rho is not exact".into())),
    }
}

/// Least even `N > 0` with `N · unit > threshold`.
pub fn minimal_even_copies(unit: &BigRational, threshold: &BigRational) -> BigUint {
    let two = BigRational::from_integer(2.into());
    let half = (threshold / (&two * unit)).floor().to_integer();
    let k: BigInt = (half + BigInt::one()).max(BigInt::one());
    (k * BigInt::from(2)).to_biguint().expect("positive")
}

/// The greedy-minimal schedule of `count` steps.
pub fn plan_family(base: &SeifertMatrix, n: usize, m: usize, c_m: &BigRational, count: usize) -> Result<FamilyPlan> {
    check_inputs(base, n, m, c_m)?;
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let unit = trefoil_unit()?;
    let mut schedule: Vec<Step> = Vec::with_capacity(count);
    for i in 1..=count {
        let t = threshold(c_m, m, schedule.last().map(|s| &s.rho));
        let copies = minimal_even_copies(&unit, &t);
        let rho = BigRational::from_integer(BigInt::from(copies.clone())) * &unit;
        let infection = Infection::LeftTrefoilSum { copies };
        let arf = infection.block_sum().arf();
        schedule.push(Step {
            i,
            infection,
            margin: &rho - &t,
            rho,
            threshold: t,
            arf,
        });
    }
    Ok(FamilyPlan {
        base: base.clone(),
        n,
        m,
        c_m: c_m.clone(),
        schedule,
        annotations: annotations(),
    })
}

fn bounds(v: &RhoValue) -> (BigRational, BigRational) {
    match v {
        RhoValue::Exact(r) => (r.clone(), r.clone()),
        RhoValue::Interval { lo, hi } => (lo.clone(), hi.clone()),
    }
}

fn rho_tolerance() -> BigRational {
    BigRational::new(1.into(), BigInt::from(1u64 << 40))
}

/// A schedule from caller-chosen infection knots with claimed ρ-values.
/// Each claim must match the computed invariant, each knot must have
/// vanishing Arf invariant, and the chain must hold for every value
/// consistent with the computed enclosures.
pub fn plan_with_infections(
    base: &SeifertMatrix,
    n: usize,
    m: usize,
    c_m: &BigRational,
    infections: &[(SeifertMatrix, BigRational)],
) -> Result<FamilyPlan> {
    check_inputs(base, n, m, c_m)?;
    if infections.is_empty() {
        return Err(Error::InvalidArgument("at least one infection knot is needed".into()));
    }
    let mut schedule: Vec<Step> = Vec::new();
    let mut previous_hi: Option<BigRational> = None;
    for (idx, (v, claimed)) in infections.iter().enumerate() {
        let i = idx + 1;
        let computed = rho_z(v, &rho_tolerance())?;
        if !computed.contains(claimed) {
            return Err(Error::Hypothesis(format!(
                "step {i}: claimed rho {claimed} disagrees with the computed value {computed}"
            )));
        }
        let arf = v.arf();
        if arf != 0 {
            return Err(Error::Hypothesis(format!("step {i}: infection knot has Arf invariant 1")));
        }
        let (lo, hi) = bounds(&computed);
        let certified = threshold(c_m, m, previous_hi.as_ref());
        if lo <= certified {
            return Err(Error::Hypothesis(format!(
                "step {i}: rho {computed} does not exceed {certified}"
            )));
        }
        let t = threshold(c_m, m, schedule.last().map(|s| &s.rho));
        schedule.push(Step {
            i,
            infection: Infection::Matrix { matrix: v.clone() },
            margin: claimed - &t,
            rho: claimed.clone(),
            threshold: t,
            arf,
        });
        previous_hi = Some(hi);
    }
    let mut notes = annotations();
    notes.remove(0);
    Ok(FamilyPlan {
        base: base.clone(),
        n,
        m,
        c_m: c_m.clone(),
        schedule,
        annotations: notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub i: usize,
    /// The recomputed invariant, exact or as an enclosure.
    pub rho: String,
    pub rho_matches: bool,
    pub arf: u8,
    pub arf_ok: bool,
    pub arf_matches: bool,
    /// For trefoil sums: the number of copies is even.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub even: Option<bool>,
    #[serde(with = "as_string")]
    pub threshold: BigRational,
    pub inequality: bool,
    /// For trefoil sums: two fewer copies would break the inequality.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal: Option<bool>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub gate: bool,
    pub inputs_ok: bool,
    pub steps: Vec<StepReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub problems: Vec<String>,
}

/// Recompute every invariant of a plan from its Seifert data and re-check
/// every inequality. Failures are reported, never raised.
pub fn verify_plan(plan: &FamilyPlan) -> VerificationReport {
    let mut problems = Vec::new();
    let gate = match plan.base.degree_gate(plan.n) {
        Ok(g) => g,
        Err(e) => {
            problems.push(e.to_string());
            false
        }
    };
    if !gate {
        problems.push(format!("degree gate fails for the base knot at level {}", plan.n));
    }
    let inputs_ok = plan.c_m.is_positive() && plan.m >= 1 && !plan.schedule.is_empty();
    if !inputs_ok {
        problems.push("c_M must be positive, m at least 1 and the schedule nonempty".into());
    }
    let unit = trefoil_unit().ok();
    let mut steps = Vec::with_capacity(plan.schedule.len());
    let mut previous_hi: Option<BigRational> = None;
    for (idx, step) in plan.schedule.iter().enumerate() {
        if step.i != idx + 1 {
            problems.push(format!("step {} is listed in position {}", step.i, idx + 1));
        }
        let sum = step.infection.block_sum();
        let computed = rho_z_sum(&sum, &rho_tolerance());
        let (rho, rho_matches, lo, hi) = match &computed {
            Ok(v) => {
                let (lo, hi) = bounds(v);
                (v.to_string(), v.contains(&step.rho), lo, hi)
            }
            Err(e) => {
                problems.push(format!("step {}: {e}", step.i));
                (String::from("unavailable"), false, BigRational::zero(), BigRational::zero())
            }
        };
        let arf = sum.arf();
        let t = threshold(&plan.c_m, plan.m, previous_hi.as_ref());
        let inequality = rho_matches && lo > t;
        let even = step.infection.copies().map(|c| c.is_even() && !c.is_zero());
        let minimal = match (step.infection.copies(), &unit) {
            (Some(c), Some(u)) if *c >= BigUint::from(2u8) => {
                let fewer = BigRational::from_integer(BigInt::from(c - 2u8)) * u;
                Some(fewer <= t)
            }
            (Some(_), Some(_)) => Some(true),
            _ => None,
        };
        let passed = rho_matches && inequality && arf == 0 && step.arf == arf && even != Some(false);
        steps.push(StepReport {
            i: step.i,
            rho,
            rho_matches,
            arf,
            arf_ok: arf == 0,
            arf_matches: step.arf == arf,
            even,
            threshold: t,
            inequality,
            minimal,
            passed,
        });
        previous_hi = Some(hi);
    }
    let passed = gate && inputs_ok && problems.is_empty() && steps.iter().all(|s| s.passed);
    VerificationReport {
        passed,
        gate,
        inputs_ok,
        steps,
        problems,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapBound {
    #[serde(with = "as_string")]
    pub value: BigRational,
    /// `2 c_M`.
    #[serde(with = "as_string")]
    pub threshold: BigRational,
    pub exceeds: bool,
}

/// `Σ ε_k ρ(J^i) - Σ ε'_k ρ(J^j)` for `i > j >= 0`, with `J^0` the unknot,
/// compared against `2 c_M`.
pub fn gap_lower_bound(
    plan: &FamilyPlan,
    i: usize,
    j: usize,
    eps_i: &EpsilonVector,
    eps_j: &EpsilonVector,
) -> Result<GapBound> {
    if i <= j {
        return Err(Error::InvalidArgument(format!("need i > j, got i = {i}, j = {j}")));
    }
    if i > plan.schedule.len() {
        return Err(Error::InvalidArgument(format!(
            "step {i} is beyond a schedule of {} steps",
            plan.schedule.len()
        )));
    }
    for (name, e) in [("eps_i", eps_i), ("eps_j", eps_j)] {
        if e.len() != plan.m {
            return Err(Error::InvalidArgument(format!(
                "{name} has {} entries but the plan has {} axes",
                e.len(),
                plan.m
            )));
        }
    }
    if eps_i.ones() == 0 {
        return Err(Error::InvalidArgument("eps_i must have a nonzero entry".into()));
    }
    let rho = |k: usize| {
        if k == 0 {
            BigRational::zero()
        } else {
            plan.schedule[k - 1].rho.clone()
        }
    };
    let count = |e: &EpsilonVector| BigRational::from_integer(e.ones().into());
    let value = count(eps_i) * rho(i) - count(eps_j) * rho(j);
    let threshold = BigRational::from_integer(2.into()) * &plan.c_m;
    Ok(GapBound {
        exceeds: value > threshold,
        value,
        threshold,
    })
}

/// The least size of a special tuple at genus `g`, a lower bound for the
/// number of axes coming from one tuple.
pub fn tuple_size_lower_bound(genus: usize) -> usize {
    (2 * genus).saturating_sub(1).max(1)
}
