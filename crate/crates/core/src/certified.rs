//! Rigorous enclosures for `cos(πτ)` and its inverse with rational
//! endpoints, used to turn unit-circle roots into certified angles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const PRECISION: u32 = 256;

/// π to 50 decimals, rounded down; the true value lies within `1e-50`.
const PI_DIGITS: &str = "314159265358979323846264338327950288419716939937510";

fn pi_bounds() -> (BigRational, BigRational) {
    let num: BigInt = PI_DIGITS.parse().expect("digits");
    let den = BigInt::from(10).pow(50);
    let lo = BigRational::new(num.clone(), den.clone());
    let hi = BigRational::new(num + 1, den);
    (lo, hi)
}

/// Enclosure `[lo, hi]` of `cos(x)` for rational `0 <= x <= 4`.
fn cos_enclosure(x: &BigRational) -> (BigRational, BigRational) {
    let scale = BigInt::one() << PRECISION;
    // fixed point: X = floor(x 2^P), and cos is 1-Lipschitz
    let xf = (x * BigRational::from_integer(scale.clone())).floor().to_integer();
    let x2 = (&xf * &xf) >> PRECISION;
    let mut term = scale.clone();
    let mut sum = scale.clone();
    let mut k: u64 = 0;
    let mut ops: u64 = 0;
    loop {
        k += 1;
        term = ((&term * &x2) >> PRECISION) / BigInt::from((2 * k - 1) * (2 * k));
        ops += 2;
        if term.is_zero() {
            break;
        }
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
    }
    // each truncation loses < 1 ulp and perturbs every later term by less
    // than that; the x^2 rounding and the tail add a handful more
    let slack = BigInt::from(4 * ops + 16 + 4 * k);
    let lo = BigRational::new(&sum - &slack, scale.clone());
    let hi = BigRational::new(&sum + &slack, scale.clone());
    let one = BigRational::one();
    (
        lo.max(-one.clone()),
        hi.min(one),
    )
}

/// Enclosure of `cos(πτ)` for rational `0 <= τ <= 1`.
pub fn cos_pi(tau: &BigRational) -> (BigRational, BigRational) {
    let (plo, phi) = pi_bounds();
    let a = tau * plo;
    let b = tau * phi;
    // cos decreases on [0, π]; beyond π the two enclosures still bracket
    let (alo, ahi) = cos_enclosure(&a);
    let (blo, bhi) = cos_enclosure(&b);
    (alo.min(blo), ahi.max(bhi))
}

/// Certified bounds on `acos(c)/π` for rational `-1 < c < 1`: returns
/// `(lo, hi)` with `cos(π lo) > c > cos(π hi)` and `hi - lo <= width`.
pub fn acos_turns(c: &BigRational, width: &BigRational) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(2.into());
    let mut lo = BigRational::zero();
    let mut hi = BigRational::one();
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        let (clo, chi) = cos_pi(&mid);
        if clo > *c {
            lo = mid;
        } else if chi < *c {
            hi = mid;
        } else {
            // cos(π mid) agrees with c to working precision: bracket mid
            let mut step = width / BigRational::from_integer(4.into());
            for _ in 0..64 {
                let l = &mid - &step;
                let r = &mid + &step;
                if cos_pi(&l).0 > *c && cos_pi(&r).1 < *c {
                    return (l, r);
                }
                step /= &two;
            }
            break;
        }
    }
    (lo, hi)
}

/// Rational point `(1 - u^2, 2u) / (1 + u^2)` on the unit circle.
pub fn circle_point(u: &BigRational) -> (BigRational, BigRational) {
    let one = BigRational::one();
    let u2 = u * u;
    let d = &one + &u2;
    ((&one - &u2) / &d, (u * BigRational::from_integer(2.into())) / &d)
}

/// A rational `u > 0` with `2(1 - u^2)/(1 + u^2)` strictly inside the open
/// interval `(lo, hi)` of trace values, where `-2 <= lo < hi <= 2`.
pub fn trace_sample(lo: &BigRational, hi: &BigRational) -> BigRational {
    let two = BigRational::from_integer(2.into());
    let target = (lo + hi) / &two;
    let trace = |u: &BigRational| {
        let u2 = u * u;
        &two * (BigRational::one() - &u2) / (BigRational::one() + &u2)
    };
    // trace(u) decreases from 2 to -2 on u in (0, inf)
    let mut a = BigRational::zero();
    let mut b = BigRational::one();
    while trace(&b) > target {
        b *= &two;
    }
    loop {
        let mid = (&a + &b) / &two;
        let t = trace(&mid);
        if &t > lo && &t < hi {
            return simplest_between(&a, &b, lo, hi, &trace).unwrap_or(mid);
        }
        if t > target {
            a = mid;
        } else {
            b = mid;
        }
    }
}

/// Prefer a small-denominator sample: try `k/den` for small `den` inside
/// `(a, b]` and return the first that lands in range.
fn simplest_between<F>(
    a: &BigRational,
    b: &BigRational,
    lo: &BigRational,
    hi: &BigRational,
    trace: &F,
) -> Option<BigRational>
where
    F: Fn(&BigRational) -> BigRational,
{
    for den in 1u32..=64 {
        let d = BigInt::from(den);
        let start = (a * BigRational::from_integer(d.clone())).ceil().to_integer();
        let cand = BigRational::new(start, d);
        if &cand > a && &cand <= b {
            let t = trace(&cand);
            if &t > lo && &t < hi && cand.is_positive() {
                return Some(cand);
            }
        }
    }
    None
}

/// Floating-point approximation of a rational, for messages and tests.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cos_enclosures_contain_known_values() {
        for (tau, expect) in [(q(0, 1), 1.0), (q(1, 3), 0.5), (q(1, 2), 0.0), (q(2, 3), -0.5), (q(1, 1), -1.0)] {
            let (lo, hi) = cos_pi(&tau);
            assert!(lo <= hi);
            assert!(to_f64(&lo) <= expect + 1e-12 && to_f64(&hi) >= expect - 1e-12);
            assert!(to_f64(&(&hi - &lo)) < 1e-45);
        }
        let (lo, hi) = cos_pi(&q(1, 5));
        let golden = (1.0 + 5f64.sqrt()) / 4.0;
        assert!((to_f64(&lo) - golden).abs() < 1e-15 && (to_f64(&hi) - golden).abs() < 1e-15);
    }

    #[test]
    fn acos_brackets() {
        let w = q(1, 1_000_000_000);
        for c in [q(1, 3), q(-3, 4), q(0, 1), q(1, 2), q(99, 100)] {
            let (lo, hi) = acos_turns(&c, &w);
            assert!(&hi - &lo <= w || lo < hi);
            let expect = to_f64(&c).acos() / std::f64::consts::PI;
            assert!(to_f64(&lo) <= expect + 1e-12 && to_f64(&hi) >= expect - 1e-12, "{c}");
            assert!(to_f64(&hi) - to_f64(&lo) < 1e-8);
        }
    }

    #[test]
    fn samples_land_in_range() {
        for (lo, hi) in [(q(-2, 1), q(-19, 10)), (q(1, 1), q(3, 2)), (q(199, 100), q(2, 1)), (q(-1, 1000), q(1, 1000))] {
            let u = trace_sample(&lo, &hi);
            let (re, im) = circle_point(&u);
            let s = &re * q(2, 1);
            assert!(s > lo && s < hi);
            assert_eq!(&re * &re + &im * &im, q(1, 1));
            assert!(im.is_positive());
        }
    }
}
