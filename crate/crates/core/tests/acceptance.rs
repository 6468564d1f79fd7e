//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use euler_sums::combin::{bell_y, factorial, harmonic, mhs, stirling1, MhsIndex};
use euler_sums::constants::{ConstantKind, ConstantRequest};
use euler_sums::numeric::{Ball, Precision};
use euler_sums::relations::{derivations, discover_sum, solve_exact};
use euler_sums::series::{euler_type_sum, SumSpec};
use euler_sums::symbolic::templates::standard_params;
use euler_sums::symbolic::{catalog, check_relation, lookup, verify, verify_route, Expectation, Identity, Route, Status, Template};
use euler_sums::Error;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use rug::ops::Pow;
use rayon::prelude::*;
use rug::Rational;

type Outcome = std::result::Result<String, String>;

fn p(bits: u32) -> Precision {
    Precision::new(bits).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn entry(id: &str) -> std::result::Result<Identity, String> {
    lookup(id).ok_or_else(|| format!("{id} missing from the registry"))
}

/// Verifies every identity; returns the failures.
fn verify_all(ids: &[Identity], prec: Precision, tol: Option<f64>, route: Route) -> Vec<String> {
    ids.iter()
        .filter_map(|i| {
            let r = verify_route(i, prec, tol.unwrap_or(i.tol), route);
            (!r.status.is_verified()).then(|| format!("{}: {} (diff {:.3e})", i.id, r.status, r.abs_diff))
        })
        .collect()
}

/// Findings must fail by more than ten times the combined radii.
fn report_findings(ids: &[Identity], prec: Precision) -> std::result::Result<Vec<String>, String> {
    ids.iter()
        .map(|i| {
            let r = verify(i, prec, i.tol);
            match r.status {
                Status::Failed { discrepancy } if discrepancy > 10.0 * r.radius => Ok(format!("{} off by {discrepancy:.3e}", i.id)),
                s => Err(format!("finding {} did not fail clearly: {s}", i.id)),
            }
        })
        .collect()
}

fn ensure(failures: Vec<String>, ok: String) -> Outcome {
    if failures.is_empty() {
        Ok(ok)
    } else {
        Err(failures.join("; "))
    }
}

fn weight_four() -> Outcome {
    let prec = p(256);
    let start = Instant::now();
    let rows: Vec<Identity> = catalog().iter().filter(|i| i.tag == "weight-4").cloned().collect();
    let literal: Vec<Identity> = catalog()
        .iter()
        .filter(|i| i.id.starts_with("w4.") && i.expectation == Expectation::Finding)
        .cloned()
        .collect();
    let failures = verify_all(&rows, prec, Some(1e-40), Route::Series);
    let secs = start.elapsed().as_secs_f64();
    let findings = report_findings(&literal, prec)?;
    if secs > 30.0 {
        return Err(format!("took {secs:.1}s"));
    }
    ensure(failures, format!("{} rows in {secs:.2}s; findings: {}", rows.len(), findings.join(", ")))
}

fn weight_five() -> Outcome {
    let rows: Vec<Identity> = (1..=11).map(|k| entry(&format!("5.{k}"))).collect::<Result<_, _>>()?;
    ensure(verify_all(&rows, p(256), Some(1e-40), Route::Series), format!("{} rows", rows.len()))
}

fn weight_six() -> Outcome {
    let prec = p(256);
    let mut failures = verify_all(&[entry("5.12")?], prec, Some(1e-20), Route::Series);
    let rows: Vec<Identity> = (1..=5).map(|k| entry(&format!("6.{k}"))).collect::<Result<_, _>>()?;
    failures.extend(verify_all(&rows, prec, Some(1e-40), Route::Series));
    ensure(failures, "5.12 and 6.1-6.5".into())
}

fn integrals() -> Outcome {
    let ids: Vec<Identity> = catalog()
        .iter()
        .filter(|i| {
            let id = i.id.as_str();
            id.starts_with("4.1[")
                || id.starts_with("4.2[")
                || (3..=12).any(|k| id == format!("4.{k}"))
                || id == "4.15"
                || id == "4.16"
                || (1..=6).any(|k| id == format!("4.A{k}"))
        })
        .cloned()
        .collect();
    if ids.len() != 26 {
        return Err(format!("expected 26 entries, found {}", ids.len()));
    }
    let mut failures = verify_all(&ids, p(256), Some(1e-30), Route::Series);
    let mut heuristic = 0;
    for i in &ids {
        let r = verify_route(i, p(128), 1e-20, Route::Quadrature);
        if !r.status.is_verified() {
            failures.push(format!("{} by quadrature: {}", i.id, r.status));
        } else if r.heuristic {
            heuristic += 1;
        }
    }
    ensure(failures, format!("{} entries by series and by quadrature ({heuristic} heuristic)", ids.len()))
}

fn templates() -> Outcome {
    let prec = p(256);
    let mut failures = Vec::new();
    let mut unsupported = Vec::new();
    let mut count = 0;
    for (t, params) in standard_params().into_iter().filter(|(t, _)| *t != Template::S1k) {
        let label = format!("{t}{params:?}");
        match check_relation(t, &params, prec, t.default_tol()) {
            Ok(r) if r.status.is_verified() => count += 1,
            Ok(r) => failures.push(format!("{label}: {}", r.status)),
            Err(Error::Unsupported(m)) if t == Template::T3_5 && params[0] == 0 => unsupported.push(m),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    if unsupported.len() != 1 {
        failures.push(format!("expected T3.5 (0,4) to be reported unsupported, got {unsupported:?}"));
    }
    ensure(failures, format!("{count} instances; reported unsupported: {}", unsupported.join(", ")))
}

fn combinatorics() -> Outcome {
    let mut failures = Vec::new();
    for n in 1..=30u32 {
        for k in 1..=n {
            let rhs = Rational::from(factorial(n - 1)) * mhs(&MhsIndex::ones(k - 1), n - 1);
            if Rational::from(stirling1(n, k)) != rhs {
                failures.push(format!("s({n},{k})"));
            }
        }
    }
    for n in 1..=50u32 {
        let h: Vec<Rational> = (1..=5).map(|k| harmonic(n, k)).collect();
        let pw = |i: usize, e: u32| Rational::from(h[i].clone().pow(e));
        let y = [
            h[0].clone(),
            pw(0, 2) + &h[1],
            pw(0, 3) + 3 * h[0].clone() * &h[1] + 2 * h[2].clone(),
            pw(0, 4) + 8 * h[0].clone() * &h[2] + 6 * pw(0, 2) * &h[1] + 3 * pw(1, 2) + 6 * h[3].clone(),
            pw(0, 5)
                + 10 * pw(0, 3) * &h[1]
                + 20 * pw(0, 2) * &h[2]
                + 15 * h[0].clone() * pw(1, 2)
                + 30 * h[0].clone() * &h[3]
                + 20 * h[1].clone() * &h[2]
                + 24 * h[4].clone(),
        ];
        for (k, e) in y.iter().enumerate() {
            if bell_y(k as u32 + 1, n) != *e {
                failures.push(format!("Y_{}({n})", k + 1));
            }
        }
        let f = Rational::from(factorial(n - 1));
        let g: Vec<Rational> = (1..=4).map(|k| harmonic(n - 1, k)).collect();
        let gp = |i: usize, e: u32| Rational::from(g[i].clone().pow(e));
        let s = [
            f.clone() / 2 * (gp(0, 2) - &g[1]),
            f.clone() / 6 * (gp(0, 3) - 3 * g[0].clone() * &g[1] + 2 * g[2].clone()),
            f.clone() / 24 * (gp(0, 4) - 6 * g[3].clone() - 6 * gp(0, 2) * &g[1] + 3 * gp(1, 2) + 8 * g[0].clone() * &g[2]),
        ];
        for (j, e) in s.iter().enumerate() {
            if Rational::from(stirling1(n, j as u32 + 3)) != *e {
                failures.push(format!("s({n},{})", j + 3));
            }
        }
    }
    for a in 1..=3u32 {
        for b in 1..=3u32 {
            for n in 0..=40u32 {
                let lhs = mhs(&MhsIndex::plain(&[a]), n) * mhs(&MhsIndex::plain(&[b]), n);
                let rhs = mhs(&MhsIndex::plain(&[a, b]), n) + mhs(&MhsIndex::plain(&[b, a]), n) + mhs(&MhsIndex::plain(&[a + b]), n);
                if lhs != rhs {
                    failures.push(format!("stuffle a={a} b={b} n={n}"));
                }
            }
        }
    }
    ensure(failures, "bridge, Bell and Stirling expansions, stuffle".into())
}

fn classical_sums() -> Outcome {
    let prec = p(128);
    let rows: Vec<Identity> = catalog()
        .iter()
        .filter(|i| i.id.starts_with("1.S[") && i.expectation == Expectation::Holds)
        .cloned()
        .collect();
    let linear = rows.iter().filter(|i| i.sum.as_ref().is_some_and(|s| s.h_indices.len() == 1)).count();
    let mut failures: Vec<String> = rows
        .par_iter()
        .filter_map(|i| {
            let nonlinear = i.sum.as_ref().is_some_and(|s| s.h_indices.len() > 1);
            let tol = if nonlinear { 1e-5 } else { 1e-6 };
            if i.terms != Some(1_000_000) {
                return Some(format!("{}: term budget {:?}", i.id, i.terms));
            }
            let r = verify(i, prec, tol);
            (!r.status.is_verified()).then(|| format!("{}: {}", i.id, r.status))
        })
        .collect();
    let literal: Vec<Identity> = catalog()
        .iter()
        .filter(|i| i.id.starts_with("1.S[") && i.expectation == Expectation::Finding)
        .cloned()
        .collect();
    let findings = report_findings(&literal, prec).unwrap_or_else(|e| {
        failures.push(e.clone());
        vec![e]
    });
    ensure(
        failures,
        format!("{linear} linear and {} nonlinear sums; findings: {}", rows.len() - linear, findings.join(", ")),
    )
}

fn discovery() -> Outcome {
    let prec = Precision::from_digits(200).unwrap();
    let mut targets: Vec<(String, SumSpec, euler_sums::symbolic::ClosedForm)> = catalog()
        .iter()
        .filter(|i| i.expectation == Expectation::Holds && !i.parametric)
        .filter_map(|i| {
            let s = i.sum.clone()?;
            let cf = i.closed_form()?;
            (s.arg == q(1, 2) && s.depth() <= 2 && s.weight() <= 5 && s.alt_h_indices.is_empty()).then(|| (i.id.clone(), s, cf))
        })
        .collect();
    let n = targets.len();
    targets.push(("5.12".into(), SumSpec::half(&[1], 5), entry("5.12")?.closed_form().unwrap()));
    let mut failures = Vec::new();
    let mut slowest = 0f64;
    for (id, spec, cf) in targets {
        let t = Instant::now();
        let found = discover_sum(&spec, spec.weight(), prec).map_err(|e| format!("{id}: {e}"))?;
        let secs = t.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        if found.closed_form() != Some(&cf.normalized()) {
            failures.push(format!("{id}: {found}"));
        }
        if secs > 60.0 {
            failures.push(format!("{id}: {secs:.1}s"));
        }
    }
    ensure(failures, format!("{n} sums of weight <= 5 and S_(1,5); slowest {slowest:.2}s"))
}

fn derivation_replay() -> Outcome {
    let mut failures = Vec::new();
    let mut reproduced = Vec::new();
    for d in derivations().map_err(|e| e.to_string())? {
        let sol = solve_exact(&d.system).map_err(|e| format!("{}: {e}", d.name))?;
        for (unknown, id) in &d.targets {
            let expected = entry(id)?.closed_form().unwrap().normalized();
            if sol.get(unknown) == Some(&expected) {
                reproduced.push(id.clone());
            } else {
                failures.push(format!("{}: {unknown} != {id}", d.name));
            }
        }
    }
    ensure(failures, format!("reproduced {}", reproduced.join(", ")))
}

fn random_chain(rng: &mut StdRng) -> std::result::Result<(), String> {
    let prec = p(rng.random_range(64..=256));
    let mut exact = q(rng.random_range(-1000..=1000), rng.random_range(1..=1000));
    let mut ball = Ball::from_rational(&exact, prec);
    for _ in 0..rng.random_range(1..8) {
        let c = q(rng.random_range(-1000..=1000), rng.random_range(1..=1000));
        let cb = Ball::from_rational(&c, prec);
        match rng.random_range(0..6) {
            0 => (exact, ball) = (exact.clone() + &c, ball.add_ball(&cb)),
            1 => (exact, ball) = (exact.clone() - &c, ball.sub_ball(&cb)),
            2 => (exact, ball) = (exact.clone() * &c, ball.mul_ball(&cb)),
            3 if c != 0 => match ball.div_ball(&cb) {
                Ok(b) => (exact, ball) = (exact.clone() / &c, b),
                Err(_) => break,
            },
            4 if exact != 0 => {
                let k: i64 = rng.random_range(-3..=3);
                let e = if k >= 0 {
                    Rational::from(exact.clone().pow(k as u32))
                } else {
                    Rational::from(exact.clone().recip().pow((-k) as u32))
                };
                match ball.pow_int(k) {
                    Ok(b) => (exact, ball) = (e, b),
                    Err(_) => break,
                }
            }
            _ => (exact, ball) = (-exact.clone(), -&ball),
        }
        if !ball.contains_rational(&exact) {
            return Err(format!("{exact} escaped {ball}"));
        }
    }
    Ok(())
}

fn properties() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for k in 0..10_000 {
        if let Err(e) = random_chain(&mut rng) {
            failures.push(format!("chain {k}: {e}"));
        }
    }

    let mut kinds = vec![ConstantKind::Log2, ConstantKind::AltDouble51];
    kinds.extend([2, 3, 4, 5, 6, 7, 9, 11].map(ConstantKind::Zeta));
    kinds.extend((1..=6).map(ConstantKind::AltZeta));
    for k in 1..=6 {
        for x in [q(1, 2), q(-1, 2), q(1, 4)] {
            kinds.push(ConstantKind::Polylog(k, x));
        }
    }
    for kind in &kinds {
        let lo = ConstantRequest { kind: kind.clone(), prec: p(128) }.evaluate();
        let hi = ConstantRequest { kind: kind.clone(), prec: p(256) }.evaluate();
        match (lo, hi) {
            (Ok(a), Ok(b)) if a.intersects(&b) && (b.rad_f64() < a.rad_f64() || b.is_exact()) => {}
            _ => failures.push(format!("precision monotonicity for {kind:?}")),
        }
    }

    let perms: [(&[u32], &[u32], u32); 4] = [
        (&[1, 2], &[2, 1], 3),
        (&[1, 1, 2], &[2, 1, 1], 1),
        (&[1, 3], &[3, 1], 1),
        (&[1, 2, 3], &[3, 1, 2], 2),
    ];
    for (a, b, outer) in perms {
        for x in [q(1, 2), q(-1, 2), q(1, 4)] {
            let sa = SumSpec::new(a, outer, x.clone()).unwrap();
            let sb = SumSpec::new(b, outer, x.clone()).unwrap();
            let (va, vb) = (euler_type_sum(&sa, p(128)), euler_type_sum(&sb, p(128)));
            let same = sa == sb && matches!((&va, &vb), (Ok(u), Ok(v)) if u.mid() == v.mid() && u.rad() == v.rad());
            if !same {
                failures.push(format!("multiset invariance for {sa}"));
            }
        }
    }

    let mut checked = 0;
    for i in catalog().iter().filter(|i| i.expectation == Expectation::Holds && !i.parametric) {
        match i.is_homogeneous() {
            Some(true) => checked += 1,
            Some(false) => failures.push(format!("{} is not weight-homogeneous", i.id)),
            None => failures.push(format!("{} has no weight", i.id)),
        }
    }
    ensure(
        failures,
        format!("10000 chains, {} constants, multiset invariance, {checked} homogeneous entries", kinds.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("weight <= 4 table", weight_four),
        ("weight 5 sums", weight_five),
        ("weight 6 sums", weight_six),
        ("log integrals and alternating sums", integrals),
        ("relation templates", templates),
        ("exact combinatorics", combinatorics),
        ("classical sums at x = 1", classical_sums),
        ("closed-form discovery", discovery),
        ("exact derivation replay", derivation_replay),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.2}s]: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{secs:.2}s]: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
