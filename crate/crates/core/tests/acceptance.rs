//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails or runs over its time budget.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    arf_by_majority, el, mul, naive_fox, naive_fox_classical, random_seifert, random_word, rng, spell, wmul,
};
use concord::certified::circle_point;
use concord::family::{gap_lower_bound, plan_family, verify_plan, EpsilonVector, Infection};
use concord::fox::{derived_membership, fox, fox_classical, DerivedSeriesOracle};
use concord::knot::SeifertMatrix;
use concord::ring::{GroupHom, Laurent, Monomial, QuotientImage};
use concord::rho::{rho_z, signature_at_rational, RhoValue};
use concord::tuples::{good_matrix, is_good, TupleFamily};
use concord::words::{commutator, conjugate, Word};
use concord::Error;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

type Check = fn() -> Result<String, String>;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rho_left_trefoil() -> Result<String, String> {
    let tol = q(1, 1_000_000_000);
    let left = rho_z(&SeifertMatrix::left_trefoil(), &tol).map_err(|e| e.to_string())?;
    let right = rho_z(&SeifertMatrix::trefoil(), &tol).map_err(|e| e.to_string())?;
    ensure(left == RhoValue::Exact(q(4, 3)), || format!("left-handed trefoil gave {left}"))?;
    ensure(right == RhoValue::Exact(q(-4, 3)), || format!("right-handed trefoil gave {right}"))?;
    Ok(format!("left {left}, right {right}"))
}

fn fox_oracles() -> Result<String, String> {
    const RANK: usize = 4;
    let mut r = rng(2024);
    let pairs = 1000;
    let mut checks = 0usize;
    for n in 0..pairs {
        let g = random_word(&mut r, RANK, 20);
        let h = random_word(&mut r, RANK, 20);
        let (gi, hi) = (g.inverse(), h.inverse());
        let c = commutator(&g, &h).unwrap();
        for i in 1..=RANK {
            // (a) commutator expansion from the derivatives of g and h
            let dg = naive_fox(RANK, &spell(&g, false), i);
            let dh = naive_fox(RANK, &spell(&h, false), i);
            let expect = &(&(&dg + &mul(&dh, &el(RANK, vec![(gi.clone(), 1)])))
                - &mul(&dg, &el(RANK, vec![(wmul(&[&g, &hi, &gi]), 1)])))
                - &mul(&dh, &el(RANK, vec![(wmul(&[&h, &g, &hi, &gi]), 1)]));
            ensure(fox(&c, i).unwrap() == expect, || format!("pair {n}: commutator expansion, index {i}"))?;

            // (b) [w, w^x] with x free of x_i
            let x = Word::reduce(RANK, h.letters().filter(|&(k, _)| k != i)).unwrap();
            let u = conjugate(&g, &x).unwrap();
            let ui = u.inverse();
            let p = el(
                RANK,
                vec![
                    (Word::identity(RANK), 1),
                    (wmul(&[&x, &gi]), 1),
                    (wmul(&[&g, &ui, &gi]), -1),
                    (wmul(&[&x, &u, &g, &ui, &gi]), -1),
                ],
            );
            let z = commutator(&g, &u).unwrap();
            ensure(fox(&z, i).unwrap() == mul(&fox(&g, i).unwrap(), &p), || {
                format!("pair {n}: conjugate factorization, index {i}")
            })?;

            // (c) [w_i, w_1] = (∂w_i) q + (∂w_1)(w_i^{-1} - [w_1, w_i])
            let qf = el(RANK, vec![(Word::identity(RANK), 1), (wmul(&[&g, &hi, &gi]), -1)]);
            let res = el(RANK, vec![(gi.clone(), 1), (wmul(&[&h, &g, &hi, &gi]), -1)]);
            let rhs = &mul(&fox(&g, i).unwrap(), &qf) + &mul(&fox(&h, i).unwrap(), &res);
            ensure(fox(&c, i).unwrap() == rhs, || format!("pair {n}: anchored identity, index {i}"))?;

            // (d) ∂ = bar(d), with d checked against the product rule too
            let d = fox_classical(&g, i).unwrap();
            ensure(d == naive_fox_classical(RANK, &spell(&g, false), i), || {
                format!("pair {n}: classical derivative, index {i}")
            })?;
            ensure(fox(&g, i).unwrap() == d.involution(), || format!("pair {n}: involution, index {i}"))?;
            checks += 5;
        }
    }
    Ok(format!("{pairs} pairs, {checks} identities"))
}

fn base_case_goodness() -> Result<String, String> {
    let x = |i| Word::generator(4, i).unwrap();
    let tuple: Vec<Word> = (1..=3).map(|i| commutator(&x(4), &x(i)).unwrap()).collect();
    let m = good_matrix(&tuple, &GroupHom::abelianization(4), 1).map_err(|e| e.to_string())?;
    let diag = Laurent::from_terms(4, [(Monomial::variable(4, 4).pow(-1), 1), (Monomial::one(4), -1)]).unwrap();
    for a in 0..3 {
        for i in 0..3 {
            let expect = if a == i { diag.clone() } else { Laurent::zero(4) };
            ensure(m.entries[a][i] == QuotientImage::Abelian(expect), || {
                format!("entry ({}, {}) is {}", a + 1, i + 1, m.entries[a][i])
            })?;
        }
    }
    ensure(is_good(&m).map_err(|e| e.to_string())?, || "diagonal matrix not good".into())?;
    // x_4 sent to the identity
    let killed = GroupHom::abelian(4, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]).unwrap();
    let m0 = good_matrix(&tuple, &killed, 1).map_err(|e| e.to_string())?;
    ensure(!is_good(&m0).map_err(|e| e.to_string())?, || "trivial pivot image still good".into())?;
    Ok(format!("diagonal entries {diag}"))
}

fn tuple_combinatorics() -> Result<String, String> {
    let g = 2;
    let mut sizes = Vec::new();
    for n in 0..=2 {
        let fam = TupleFamily::new(g, n).unwrap();
        let listed = fam.iter().count();
        ensure(BigUint::from(listed) == fam.count(), || format!("level {n}: {listed} listed vs {}", fam.count()))?;
        sizes.push(listed);
    }
    ensure(sizes == [1, 4, 500], || format!("sizes {sizes:?}"))?;
    let per = TupleFamily::new(g, 2).unwrap().children_per_parent();
    ensure(per == BigUint::from(125u32) && sizes[2] / sizes[1] == 125, || format!("children per parent {per}"))?;

    for n in 0..=1 {
        for t in TupleFamily::new(g, n).unwrap().iter() {
            for w in &t.words {
                ensure(derived_membership(w, n).unwrap(), || format!("{w} not in F^({n})"))?;
            }
        }
    }
    let fam = TupleFamily::new(g, 2).unwrap();
    let mut r = rng(4);
    let mut oracle = DerivedSeriesOracle::default();
    for _ in 0..100 {
        let t = fam.tuple_at(&BigUint::from(r.gen_range(0u32..500))).unwrap();
        for w in &t.words {
            ensure(oracle.contains(w, 2).map_err(|e| e.to_string())?, || format!("{w} not in F^(2)"))?;
        }
    }
    Ok(format!("|P_0|, |P_1|, |P_2| = {sizes:?}; 100 sampled level-2 tuples in F^(2)"))
}

/// `det(tV - Vᵀ)` at an integer `t`, by fraction-free elimination.
fn det_at(v: &[Vec<i64>], t: i64) -> BigInt {
    let n = v.len();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(t * v[i][j] - v[j][i])).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
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
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn alexander_arf() -> Result<String, String> {
    let t = SeifertMatrix::trefoil();
    let poly = t.alexander().to_string();
    ensure(poly == "t^2 - t + 1", || format!("trefoil Δ = {poly}"))?;
    ensure(t.arf() == 1, || "trefoil Arf".into())?;
    ensure(t.connected_sum(&t).arf() == 0, || "trefoil # trefoil Arf".into())?;
    let mut r = rng(5);
    for k in 0..500 {
        let genus = r.gen_range(1..=4);
        let v = random_seifert(&mut r, genus);
        let delta = v.alexander();
        let c: Vec<BigInt> = delta.coefficients().to_vec();
        let rev: Vec<BigInt> = c.iter().rev().cloned().collect();
        ensure(c == rev, || format!("matrix {k}: Δ not symmetric"))?;
        let at_one = delta.eval(&BigInt::one());
        ensure(at_one.abs().is_one(), || format!("matrix {k}: Δ(1) = {at_one}"))?;
        // det(tV - Vᵀ) = ±t^a Δ(t) at 2g + 1 points pins the polynomial down
        let slack = 2 * genus - delta.degree();
        let matches = (0..=slack).any(|shift| {
            [1i64, -1].iter().any(|&s| {
                (2..=2 * genus as i64 + 2).all(|x| {
                    det_at(v.entries(), x) == BigInt::from(s) * BigInt::from(x).pow(shift as u32) * delta.eval(&BigInt::from(x))
                })
            })
        });
        ensure(matches, || format!("matrix {k}: det(tV - Vᵀ) is not a unit multiple of Δ"))?;
        ensure(v.arf() == arf_by_majority(v.entries()), || format!("matrix {k}: Arf disagrees with the quadratic form"))?;
    }
    Ok("trefoil t^2 - t + 1 with Arf 1; 500 random matrices checked".into())
}

fn family_planner() -> Result<String, String> {
    let base = SeifertMatrix::torus_2(2);
    let plan = plan_family(&base, 2, 3, &q(10, 1), 2).map_err(|e| e.to_string())?;
    let copies: Vec<BigUint> = plan.schedule.iter().map(|s| s.infection.copies().unwrap().clone()).collect();
    ensure(copies == [BigUint::from(16u8), BigUint::from(112u8)], || format!("copies {copies:?}"))?;
    let report = verify_plan(&plan);
    ensure(report.passed, || format!("verification failed: {report:?}"))?;
    for k in 0..plan.schedule.len() {
        let mut low = plan.clone();
        let c = &copies[k] - 2u8;
        low.schedule[k].rho = BigRational::from_integer(BigInt::from(c.clone())) * q(4, 3);
        low.schedule[k].infection = Infection::LeftTrefoilSum { copies: c };
        ensure(!verify_plan(&low).passed, || format!("step {} still passes with two fewer copies", k + 1))?;
    }
    let full = EpsilonVector::new(vec![true; 3]);
    let mut worst: Option<BigRational> = None;
    for hot in 0..3 {
        let mut bits = vec![false; 3];
        bits[hot] = true;
        let gap = gap_lower_bound(&plan, 2, 1, &EpsilonVector::new(bits), &full).map_err(|e| e.to_string())?;
        ensure(gap.exceeds, || format!("gap {} does not exceed {}", gap.value, gap.threshold))?;
        worst = Some(gap.value);
    }
    Ok(format!("n = {}, {}; gap {} > 20", copies[0], copies[1], worst.unwrap()))
}

/// `e^{iπτ}` as an exact rational point, within rounding of `τ`.
fn rational_point(tau: f64) -> (BigRational, BigRational) {
    // a short dyadic keeps the Hermitian entries small
    let scale = (1u64 << 30) as f64;
    let t = (std::f64::consts::PI * tau / 2.0).tan();
    let u = BigRational::new(BigInt::from((t * scale).round() as i64), BigInt::from(1u64 << 30));
    circle_point(&u)
}

fn riemann_rho(v: &SeifertMatrix, samples: usize) -> BigRational {
    let mut total = BigInt::zero();
    for k in 0..samples {
        let mut tau = (k as f64 + 0.5) / samples as f64;
        loop {
            let (re, im) = rational_point(tau);
            match signature_at_rational(v, &re, &im) {
                Ok(s) => {
                    total += s;
                    break;
                }
                Err(Error::AtJump(_)) => tau += 1e-9,
                Err(e) => panic!("{e}"),
            }
        }
    }
    BigRational::new(total, BigInt::from(samples))
}

fn signature_cross_check() -> Result<String, String> {
    let tol = q(1, 1 << 30);
    let cases = [
        ("left trefoil", SeifertMatrix::left_trefoil()),
        ("T(2,5)", SeifertMatrix::torus_2(2)),
        ("T(2,7)", SeifertMatrix::torus_2(3)),
        ("figure eight", SeifertMatrix::figure_eight()),
        ("trefoil # T(2,5)", SeifertMatrix::trefoil().connected_sum(&SeifertMatrix::torus_2(2))),
    ];
    let mut worst = 0f64;
    for (name, v) in &cases {
        let exact = rho_z(v, &tol).map_err(|e| e.to_string())?;
        let exact = exact.exact().cloned().ok_or_else(|| format!("{name}: not exact"))?;
        let estimate = riemann_rho(v, 10_000);
        let err = (&exact - &estimate).abs().to_f64().unwrap();
        worst = worst.max(err);
        ensure(err < 1e-3, || format!("{name}: exact {exact}, estimate {estimate}"))?;
    }
    let mut r = rng(7);
    for k in 0..200 {
        let (ga, gb) = (r.gen_range(1..=3), r.gen_range(1..=2));
        let a = random_seifert(&mut r, ga);
        let b = random_seifert(&mut r, gb);
        let sum = a.connected_sum(&b);
        let mirror = a.mirror_reverse();
        for _ in 0..5 {
            let (re, im) = circle_point(&q(r.gen_range(1..1000), r.gen_range(1..300)));
            let (sa, sb, ss, sm) = (
                signature_at_rational(&a, &re, &im),
                signature_at_rational(&b, &re, &im),
                signature_at_rational(&sum, &re, &im),
                signature_at_rational(&mirror, &re, &im),
            );
            match (sa, sb, ss, sm) {
                (Ok(x), Ok(y), Ok(s), Ok(m)) => {
                    ensure(s == x + y, || format!("pair {k}: σ(A#B) = {s} but σ(A) + σ(B) = {}", x + y))?;
                    ensure(m == -x, || format!("pair {k}: σ(-Aᵀ) = {m} but σ(A) = {x}"))?;
                }
                (Err(Error::AtJump(_)), ..) | (_, Err(Error::AtJump(_)), ..) => {}
                other => return Err(format!("pair {k}: unexpected {other:?}")),
            }
        }
    }
    Ok(format!("worst Riemann error {worst:.2e}; 200 random pairs additive and odd"))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Duration, Check); 7] = [
        (1, "rho of the left-handed trefoil is exactly 4/3, mirror -4/3", Duration::from_secs(1), rho_left_trefoil),
        (2, "Fox engine agrees with closed forms and involution on 1000 random pairs", Duration::from_secs(30), fox_oracles),
        (3, "base-case good matrix is diagonal and good; trivial pivot is not", Duration::from_secs(1), base_case_goodness),
        (4, "tuple family sizes 1, 4, 500 and derived-series membership", Duration::from_secs(60), tuple_combinatorics),
        (5, "Alexander polynomial and Arf invariant suite", Duration::from_secs(30), alexander_arf),
        (6, "family planner gives 16, 112, verifies, is minimal, beats the gap", Duration::from_secs(5), family_planner),
        (7, "exact rho matches a 10^4-point Riemann sum; signatures additive and odd", Duration::from_secs(60), signature_cross_check),
    ];
    let mut failures = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS [{id}] {name} ({elapsed:.2?}): {detail}"),
            Err(why) => {
                failures += 1;
                println!("FAIL [{id}] {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
