use std::time::Instant;

use euler_sums::relations::{derivations, discover_sum, solve_exact, Discovery};
use euler_sums::symbolic::{catalog, lookup, EvalContext, Expectation};
use euler_sums::series::SumSpec;
use euler_sums::symbolic::{Atom, ClosedForm, Monomial};
use euler_sums::{Ball, Precision};
use rug::Rational;

fn half_sums() -> Vec<(String, SumSpec, ClosedForm)> {
    catalog()
        .iter()
        .filter(|i| i.expectation == Expectation::Holds && !i.parametric)
        .filter_map(|i| {
            let s = i.sum.clone()?;
            let cf = i.closed_form()?;
            (s.arg == Rational::from((1, 2)) && s.depth() <= 2 && s.weight() <= 5 && s.alt_h_indices.is_empty())
                .then(|| (i.id.clone(), s, cf))
        })
        .collect()
}

#[test]
fn discovery_reproduces_registry_closed_forms() {
    let prec = Precision::from_digits(200).unwrap();
    let sums = half_sums();
    assert!(sums.len() >= 15, "{}", sums.len());
    for (id, spec, cf) in sums {
        let t = Instant::now();
        let d = discover_sum(&spec, spec.weight(), prec).unwrap();
        let el = t.elapsed().as_secs_f64();
        assert_eq!(d.closed_form(), Some(&cf.normalized()), "{id}: {d}");
        assert!(el < 60.0);
    }
}

#[test]
fn discovery_finds_weight_six_sum_with_alternating_double_zeta() {
    let prec = Precision::from_digits(200).unwrap();
    let spec = SumSpec::half(&[1], 5);
    let t = Instant::now();
    let d = discover_sum(&spec, 6, prec).unwrap();
    assert!(t.elapsed().as_secs_f64() < 60.0);
    let expected = lookup("5.12").unwrap().closed_form().unwrap();
    assert_eq!(d.closed_form(), Some(&expected.normalized()));
    let Discovery::Found { closed_form, .. } = d else { panic!() };
    assert_eq!(closed_form.coefficient(&Monomial::atom(Atom::Zb51)), Rational::from((-1, 2)));
}

#[test]
fn derivations_reproduce_weight_five_closed_forms() {
    let ctx = EvalContext::new(Precision::new(192).unwrap());
    for d in derivations().unwrap() {
        let sol = solve_exact(&d.system).unwrap();
        assert!(d.system.residuals(&sol).unwrap().iter().all(|r| r.is_zero()), "{}", d.name);
        for (unknown, id) in &d.targets {
            let expected = lookup(id).unwrap().closed_form().unwrap().normalized();
            assert_eq!(sol[unknown], expected, "{} -> {id}", d.name);
        }
        // every equation row holds numerically for the unknowns' own values
        let vals: Vec<_> = d.values.iter().map(|e| e.evaluate(&ctx).unwrap().ball).collect();
        for eq in &d.system.equations {
            let mut acc = Ball::zero(ctx.prec);
            for (c, v) in eq.coeffs.iter().zip(&vals) {
                acc = acc + v.mul_rational(c);
            }
            let rhs = eq.rhs.evaluate(ctx.prec).unwrap();
            assert!(acc.mid_distance(&rhs) < 1e-40, "{} row {}", d.name, eq.label);
        }
    }
}
