use euler_sums::numeric::{Ball, Precision};
use euler_sums::series::SumSpec;
use euler_sums::symbolic::{
    catalog, catalog_lines, check_relation, lookup, parse_cf, verify, Atom, ClosedForm, Expectation, Identity, Monomial, Status,
    Template, Weight,
};
use proptest::prelude::*;
use rug::Rational;

fn p(bits: u32) -> Precision {
    Precision::new(bits).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

#[test]
fn evaluate_examples() {
    let prec = p(256);
    let zero = ClosedForm::zero().evaluate(prec).unwrap();
    assert!(zero.is_exact() && zero.mid_f64() == 0.0);
    let z2 = parse_cf("z2").evaluate(prec).unwrap();
    assert!((z2.mid_f64() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
    let rhs = lookup("5.1").unwrap().closed_form().unwrap().evaluate(prec).unwrap();
    let lhs = euler_sums::series::euler_type_sum(&SumSpec::half(&[1], 4), prec).unwrap();
    assert!(lhs.mid_distance(&rhs) < 1e-60);
}

#[test]
fn weight_examples() {
    assert_eq!(parse_cf("z3 - 1/2*z2*log2").weight(), Weight::Exact(3));
    assert_eq!(lookup("5.11").unwrap().closed_form().unwrap().weight(), Weight::Exact(5));
    assert_eq!(ClosedForm::constant(1).weight(), Weight::Exact(0));
    assert_eq!(parse_cf("z3 + log2").weight(), Weight::Mixed);
}

#[test]
fn verify_examples() {
    let prec = p(256);
    for id in ["5.8", "6.5"] {
        let r = verify(&lookup(id).unwrap(), prec, 1e-40);
        assert!(r.status.is_verified(), "{id}: {}", r.status);
    }
}

#[test]
fn perturbed_coefficient_fails() {
    let prec = p(256);
    let base = lookup("5.8").unwrap();
    let spec = base.sum.clone().unwrap();
    let eps = q(1, 1000);
    let perturbed = base.closed_form().unwrap() + ClosedForm::atom(Atom::Zeta(5)).scale(&eps);
    let id = Identity::sum_closed("5.8.perturbed", "test", spec, perturbed);
    let r = verify(&id, prec, 1e-40);
    let Status::Failed { discrepancy } = r.status else {
        panic!("expected failure, got {}", r.status);
    };
    let expected = 1e-3 * Atom::Zeta(5).value(prec).unwrap().mid_f64();
    assert!((discrepancy - expected).abs() < 1e-12, "{discrepancy} vs {expected}");
    assert!(discrepancy > 10.0 * r.radius);
}

#[test]
fn relation_examples() {
    let prec = p(256);
    for (t, params) in [
        (Template::T3_1, vec![q(0, 1)]),
        (Template::T2_3, vec![q(0, 1)]),
        (Template::TS21, vec![q(3, 1), q(1, 2)]),
    ] {
        let r = check_relation(t, &params, prec, 1e-25).unwrap();
        assert!(r.status.is_verified(), "{} {params:?}: {}", t.name(), r.status);
    }
}

#[test]
fn normalization_is_idempotent() {
    let f = parse_cf("z4 + 3/7*z2*z3 - li4*log2 + z6");
    assert_eq!(f.normalized(), f.normalized().normalized());
    assert_eq!(f.coefficient(&Monomial::power(Atom::Zeta(2), 2)), q(2, 5));
    assert_eq!(f.coefficient(&Monomial::power(Atom::Zeta(2), 3)), q(8, 35));
}

#[test]
fn zeta4_round_trip_preserves_value() {
    let prec = p(256);
    let f = parse_cf("z4 - 2*z3*log2");
    let printed = f.pretty();
    assert!(printed.contains("ζ(4)"), "{printed}");
    let back: ClosedForm = f.to_string().parse().unwrap();
    assert_eq!(f, back);
    let direct = euler_sums::constants::zeta(4, prec).unwrap() - parse_cf("2*z3*log2").evaluate(prec).unwrap();
    assert!(f.evaluate(prec).unwrap().intersects(&direct));
}

#[test]
fn serialization_format() {
    assert_eq!(parse_cf("1/2*z2").to_string(), "1/2 * z2");
    let s = parse_cf("-7/4*z3*log2^2 + zb5_1").to_string();
    assert!(s.contains("z3") && s.contains("log2^2") && s.contains("zb5_1"), "{s}");
    let lines = catalog_lines(&[lookup("5.1").unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&lines).unwrap();
    for field in ["id", "lhs", "rhs", "tag", "status"] {
        assert!(v.get(field).is_some(), "missing {field}");
    }
    assert_eq!(v["id"], "5.1");
}

#[test]
fn catalog_contents() {
    let c = catalog();
    assert!(c.len() >= 60);
    for k in 1..=12 {
        let id = format!("5.{k}");
        assert!(c.iter().any(|i| i.id == id), "{id}");
    }
    assert!(c.iter().any(|i| i.id == "4.7"));
    assert!(c.iter().any(|i| i.id.starts_with("S_1k")));
    let mut ids: Vec<&str> = c.iter().map(|i| i.id.as_str()).collect();
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), c.len(), "duplicate ids");
}

#[test]
fn registry_is_weight_homogeneous() {
    for i in catalog() {
        if i.expectation == Expectation::Finding || i.parametric {
            continue;
        }
        if let Some(h) = i.is_homogeneous() {
            assert!(h, "{} is not homogeneous: {} = {}", i.id, i.lhs_text, i.rhs_text);
        }
    }
    let unchecked: Vec<&str> = catalog()
        .iter()
        .filter(|i| i.expectation == Expectation::Holds && !i.parametric && i.is_homogeneous().is_none())
        .map(|i| i.id.as_str())
        .collect();
    assert!(unchecked.is_empty(), "no weight for {unchecked:?}");
}

fn atom_strategy() -> impl Strategy<Value = Atom> {
    prop_oneof![
        Just(Atom::Log2),
        Just(Atom::Zeta(2)),
        Just(Atom::Zeta(3)),
        Just(Atom::Zeta(5)),
        Just(Atom::Li(4)),
        Just(Atom::Li(5)),
        Just(Atom::Zb51),
    ]
}

fn form_strategy() -> impl Strategy<Value = ClosedForm> {
    prop::collection::vec((prop::collection::vec(atom_strategy(), 0..3), -50i64..50, 1i64..20), 0..5).prop_map(|terms| {
        let mut f = ClosedForm::zero();
        for (atoms, n, d) in terms {
            let mut m = Monomial::unit();
            for a in atoms {
                m = m.mul(&Monomial::atom(a));
            }
            f.add_term(m, q(n, d));
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluation_is_linear(f in form_strategy(), g in form_strategy(), an in -30i64..30, ad in 1i64..10, bn in -30i64..30, bd in 1i64..10) {
        let prec = p(128);
        let (a, b) = (q(an, ad), q(bn, bd));
        let combined = (f.scale(&a) + g.scale(&b)).evaluate(prec).unwrap();
        let parts = f.evaluate(prec).unwrap().mul_rational(&a) + g.evaluate(prec).unwrap().mul_rational(&b);
        prop_assert!(combined.intersects(&parts));
        prop_assert!(combined.mid_distance(&parts) <= combined.rad_f64() + parts.rad_f64() + 1e-30);
    }

    #[test]
    fn normalization_idempotent_on_random_forms(f in form_strategy()) {
        prop_assert_eq!(f.normalized(), f.normalized().normalized());
        let back: ClosedForm = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn ball_sanity_for_unit() {
    let one = ClosedForm::constant(1).evaluate(p(64)).unwrap();
    assert!(one.intersects(&Ball::one(p(64))));
}
