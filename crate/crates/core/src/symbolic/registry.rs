//! Built-in catalog of identities.

use std::cmp::Ordering;
use std::sync::OnceLock;

use rug::Rational;

use crate::combin::bell_poly;
use crate::quad::Linear;
use crate::series::{Factor, Series, SumSpec};

use super::closed::parse_cf;
use super::expr::Expr;
use super::identity::{Expectation, Identity};
use super::routes::*;
use super::templates::{instance, standard_params};

/// Term budget for sums at `x = 1`.
pub const UNIT_TERMS: u64 = 1_000_000;

fn one() -> Rational {
    Rational::from(1)
}

fn minus_one() -> Rational {
    Rational::from(-1)
}

fn r(n: i64) -> Rational {
    Rational::from(n)
}

fn s_half(h: &[u32], p: u32) -> Expr {
    Expr::sum(&SumSpec::half(h, p))
}

fn sum_half(id: &str, tag: &str, h: &[u32], p: u32, cf: &str) -> Identity {
    Identity::sum_closed(id, tag, SumSpec::half(h, p), parse_cf(cf))
}

fn sum_unit(id: &str, h: &[u32], p: u32, cf: &str) -> Identity {
    let spec = SumSpec::new(h, p, one()).expect("valid indices");
    Identity::sum_closed(id, "classical", spec, parse_cf(cf))
        .tol(1e-6)
        .terms(UNIT_TERMS)
}

fn t() -> Linear {
    Linear::t()
}

fn omt() -> Linear {
    Linear::one_minus_t()
}

fn opt() -> Linear {
    Linear::one_plus_t()
}

fn weight_four() -> Vec<Identity> {
    let rows: [(&str, &[u32], u32, &str); 10] = [
        ("w4.1", &[1], 1, "1/2*z2"),
        ("w4.2", &[2], 1, "5/8*z3"),
        ("w4.3", &[1, 1], 1, "7/8*z3"),
        ("w4.4", &[1], 2, "z3 - 1/2*z2*log2"),
        ("w4.5", &[1], 3, "li4 + 1/8*z4 - 1/8*z3*log2 + 1/24*log2^4"),
        ("w4.6", &[2], 2, "li4 + 1/16*z4 + 1/4*z3*log2 - 1/4*z2*log2^2 + 1/24*log2^4"),
        ("w4.7", &[3], 1, "li4 - 5/16*z4 + 7/8*z3*log2 - 1/4*z2*log2^2 + 1/24*log2^4"),
        ("w4.8", &[1, 1], 2, "-li4 + 37/16*z4 - 7/4*z3*log2 + 1/4*z2*log2^2 - 1/24*log2^4"),
        ("w4.9", &[1, 2], 1, "li4 - 1/8*z4 + 7/8*z3*log2 - 1/4*z2*log2^2 + 1/24*log2^4"),
        ("w4.10", &[1, 1, 1], 1, "-5*li4 + 25/4*z4 - 35/8*z3*log2 + 5/4*z2*log2^2 - 5/24*log2^4"),
    ];
    let mut out: Vec<Identity> = rows
        .iter()
        .map(|(id, h, p, cf)| sum_half(id, "weight-4", h, *p, cf))
        .collect();
    // literal readings of three displays, kept next to the corrected rows
    let literal: [(&str, &[u32], u32, &str, &str); 3] = [
        (
            "w4.7.literal",
            &[3],
            1,
            "li4 - 5/16*z4 + 7/8*z3*log2 - 1/4*z2*log2^3 + 1/24*log2^4",
            "log^2 2(2) read as log^3(2); the corrected row w4.7 uses log^2(2)",
        ),
        (
            "w4.8.literal",
            &[1, 1],
            2,
            "-li4 + 37/16*z4 - 7/4*z3*log2 + 1/4*z2*log2^3 - 1/24*log2^4",
            "log^2 2(2) read as log^3(2); the corrected row w4.8 uses log^2(2)",
        ),
        (
            "w4.10.literal",
            &[1, 1, 1],
            1,
            "-5*li4 + 25/4*z4 - 35/8*z3*log2 + 5/4*z2*log2^2 - 5/24*log2^5",
            "last term printed as log^5(2); the corrected row w4.10 uses log^4(2)",
        ),
    ];
    for (id, h, p, cf, note) in literal {
        out.push(sum_half(id, "finding", h, p, cf).finding(note));
    }
    out
}

fn weight_five() -> Vec<Identity> {
    let rows: [(&str, &[u32], u32, &str); 11] = [
        (
            "5.1",
            &[1],
            4,
            "2*li5 + li4*log2 + 1/32*z5 - 1/2*z2*z3 - 1/8*z4*log2 + 1/2*z3*log2^2 - 1/6*z2*log2^3 + 1/40*log2^5",
        ),
        (
            "5.2",
            &[2],
            3,
            "-2*li5 - 3*li4*log2 + 23/64*z5 + 23/16*z2*z3 - 1/16*z4*log2 - 23/16*z3*log2^2 + 7/12*z2*log2^3 - 13/120*log2^5",
        ),
        (
            "5.3",
            &[3],
            2,
            "4*li5 + 3*li4*log2 - 81/64*z5 - 7/8*z2*z3 + 5/16*z4*log2 + 7/8*z3*log2^2 - 5/12*z2*log2^3 + 11/120*log2^5",
        ),
        (
            "5.4",
            &[4],
            1,
            "-li5 - li4*log2 + 27/32*z5 + 7/16*z2*z3 - 7/16*z3*log2^2 + 1/6*z2*log2^3 - 1/30*log2^5",
        ),
        (
            "5.5",
            &[1, 1],
            3,
            "-2*li5 - li4*log2 + 279/64*z5 - 9/16*z2*z3 - 37/16*z4*log2 + 7/16*z3*log2^2 + 1/12*z2*log2^3 - 1/40*log2^5",
        ),
        (
            "5.6",
            &[1, 1, 1],
            2,
            "-14*li5 - 9*li4*log2 + 279/16*z5 - 7/8*z2*z3 - 25/4*z4*log2 - 7/4*z3*log2^2 + 13/12*z2*log2^3 - 31/120*log2^5",
        ),
        (
            "5.7",
            &[1, 2],
            2,
            "2*li5 + li4*log2 - 31/32*z5 + 1/8*z2*z3 + 1/8*z4*log2 - 1/12*z2*log2^3 + 1/40*log2^5",
        ),
        (
            "5.8",
            &[1, 3],
            1,
            "3*li5 + 3*li4*log2 - 31/64*z5 - 7/8*z2*z3 + 21/16*z3*log2^2 - 1/2*z2*log2^3 + 1/10*log2^5",
        ),
        (
            "5.9",
            &[1, 1, 2],
            1,
            "3*li5 + 3*li4*log2 - 31/32*z5 - 7/16*z2*z3 + 21/16*z3*log2^2 - 1/2*z2*log2^3 + 1/10*log2^5",
        ),
        (
            "5.10",
            &[1, 1, 1, 1],
            1,
            "-15*li5 - 15*li4*log2 + 341/16*z5 - 35/16*z2*z3 - 105/16*z3*log2^2 + 5/2*z2*log2^3 - 1/2*log2^5",
        ),
        (
            "5.11",
            &[2, 2],
            1,
            "-7*li5 - 7*li4*log2 + 31/16*z5 + 49/16*z2*z3 - 49/16*z3*log2^2 + 7/6*z2*log2^3 - 7/30*log2^5",
        ),
    ];
    rows.iter()
        .map(|(id, h, p, cf)| sum_half(id, "weight-5", h, *p, cf))
        .collect()
}

fn weight_six() -> Vec<Identity> {
    let li2 = Expr::polylog(2, half());
    let li3 = Expr::polylog(3, half());
    let li4 = closed("li4");
    let li6 = closed("li6");
    vec![
        sum_half(
            "5.12",
            "weight-6",
            &[1],
            5,
            "3*li6 + li5*log2 - 1/2*zb5_1 - 51/32*z6 - 1/4*z3^2 - 1/32*z5*log2 + 1/2*z2*z3*log2 \
             + 1/16*z4*log2^2 - 1/6*z3*log2^3 + 1/24*z2*log2^4 - 1/240*log2^6",
        )
        .tol(1e-20),
        Identity::new(
            "6.1",
            "weight-6",
            li3.pow(2),
            s_half(&[3], 3).scale(&r(2)) + s_half(&[2], 4).scale(&r(6)) + s_half(&[1], 5).scale(&r(12))
                - li6.scale(&r(20)),
        ),
        Identity::new(
            "6.2",
            "weight-6",
            &li2 * &li4,
            s_half(&[4], 2)
                + s_half(&[3], 3).scale(&r(2))
                + s_half(&[2], 4).scale(&r(4))
                + s_half(&[1], 5).scale(&r(8))
                - li6.scale(&r(15)),
        ),
        Identity::new(
            "6.3",
            "weight-6",
            closed("li5*log2"),
            s_half(&[5], 1) + s_half(&[4], 2) + s_half(&[3], 3) + s_half(&[2], 4) + s_half(&[1], 5).scale(&r(2))
                - li6.scale(&r(6)),
        ),
        Identity::new(
            "6.4a",
            "weight-6",
            Expr::mpl(&[4, 1, 1], half()),
            s_half(&[1, 1], 4).scale(&half()) - s_half(&[2], 4).scale(&half()) - s_half(&[1], 5) + li6.clone(),
        ),
        Identity::new(
            "6.4",
            "weight-6",
            Expr::mpl(&[4, 1, 1], half()),
            closed(
                "23/32*z6 - 1/2*z3^2 + li5*log2 + 1/2*li4*log2^2 - 63/32*z5*log2 + 1/2*z2*z3*log2 \
                 + 1/2*z4*log2^2 - 1/24*z2*log2^4 + 1/90*log2^6",
            ),
        ),
        Identity::new(
            "6.5a",
            "weight-6",
            s_half(&[5], 1),
            li6 + closed("li5*log2") - &li2 * &li4 + li3.pow(2).scale(&half()),
        ),
        sum_half(
            "6.5",
            "weight-6",
            &[5],
            1,
            "li6 + li5*log2 - 1/2*li4*z2 + 1/2*li4*log2^2 + 49/128*z3^2 - 7/16*z2*z3*log2 \
             + 5/16*z4*log2^2 + 7/48*z3*log2^3 - 1/12*z2*log2^4 + 1/72*log2^6",
        ),
    ]
}

fn integrals() -> Vec<Identity> {
    let mut out = Vec::new();
    for m in 1..=4u32 {
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let fact = (1..=i64::from(m)).product::<i64>();
        let rhs = zeta(m + 1).scale(&r(sign * fact));
        out.push(
            Identity::new(format!("4.1[m={m}]"), "integral", log_one_minus_over_x(m), rhs)
                .quadrature(quad01(vec![(omt(), m)], Some(t())))
                .lhs_label(format!("int_0^1 log^{m}(1-x)/x dx"))
                .tol(1e-30)
                .parametric(),
        );
        let c = Rational::from((2 * sign * fact * ((1 << m) - 1), 1 << m));
        out.push(
            Identity::new(format!("4.2[m={m}]"), "integral", log_over_one_minus_half(m), zeta(m + 1).scale(&c))
                .quadrature(quad01(vec![(omt(), m)], Some(Linear::one_minus_half_t())))
                .lhs_label(format!("int_0^1 log^{m}(1-x)/(1-x/2) dx"))
                .tol(1e-30)
                .parametric(),
        );
    }
    let h13 = s_half(&[1], 3);
    let h14 = s_half(&[1], 4);
    let lg1m = |e| (Linear::one_minus_half_t(), e);
    let rows: Vec<(&str, Expr, Expr, Expr, &str)> = vec![
        (
            "4.3",
            half_to_one(1, 2),
            half_to_one_quad(1, 2),
            closed("-2*li4 - 1/2*z4 + 1/4*z3*log2 - 1/3*log2^4") + h13.scale(&r(2)),
            "int_1/2^1 log(x) log^2(1-x)/x dx",
        ),
        (
            "4.4",
            half_to_one(2, 1),
            half_to_one_quad(2, 1),
            closed("2*li4 - 2*z4 + 7/4*z3*log2 - 1/2*z2*log2^2 - 1/6*log2^4"),
            "int_1/2^1 log^2(x) log(1-x)/x dx",
        ),
        (
            "4.5",
            log1p_logm(2),
            quad01(vec![(opt(), 1), (omt(), 2)], Some(t())),
            closed("2*li4 - 5/8*z4 + 7/4*z3*log2 - 1/2*z2*log2^2 + 1/12*log2^4"),
            "int_0^1 log(1+x) log^2(1-x)/x dx",
        ),
        (
            "4.6",
            Expr::series(poly_series(half(), &[], &bell_poly(3), 2)),
            quad01(vec![lg1m(1), (omt(), 3)], Some(t())),
            closed("12*z5 - 21/4*z4*log2 - 9/4*z2*z3"),
            "int_0^1 log(1-x/2) log^3(1-x)/x dx",
        ),
        (
            "4.7",
            log1p_over_one_minus(1, 3),
            quad01(vec![(opt(), 1), (t(), 3)], Some(omt())),
            closed("12*z5 - 45/4*z4*log2 - 9/4*z2*z3"),
            "int_0^1 log(1+t) log^3(t)/(1-t) dt",
        ),
        (
            "4.8",
            log1p_over_one_plus(2, 2),
            quad01(vec![(opt(), 2), (t(), 2)], Some(opt())),
            closed(
                "8*li5 + 8*li4*log2 - 33/8*z5 - 2*z2*z3 + 7/2*z3*log2^2 - 4/3*z2*log2^3 + 4/15*log2^5",
            ),
            "int_0^1 log^2(1+x) log^2(x)/(1+x) dx",
        ),
        (
            "4.9",
            log1p2_logm(2),
            quad01(vec![(opt(), 2), (omt(), 2)], Some(t())),
            closed("4*li5 + 4*li4*log2 - 25/8*z5 + 7/4*z3*log2^2 - 2/3*z2*log2^3 + 2/15*log2^5"),
            "int_0^1 log^2(1+x) log^2(1-x)/x dx",
        ),
        (
            "4.10",
            half_to_one(1, 3),
            half_to_one_quad(1, 3),
            closed("-6*li5 + 3/4*z4*log2 - 3/8*z3*log2^2 + 1/4*log2^5") + h14.scale(&r(6)),
            "int_1/2^1 log(x) log^3(1-x)/x dx",
        ),
        (
            "4.11",
            half_to_one(2, 2),
            half_to_one_quad(2, 2),
            closed("4*li5 + 8*z5 - 4*z2*z3 - 1/2*z4*log2 + 1/4*z3*log2^2 + 1/6*log2^5") - h14.scale(&r(4)),
            "int_1/2^1 log^2(x) log^2(1-x)/x dx",
        ),
        (
            "4.12",
            half_to_one(3, 1),
            half_to_one_quad(3, 1),
            closed("-6*li5 - 6*li4*log2 + 6*z5 - 21/8*z3*log2^2 + z2*log2^3"),
            "int_1/2^1 log^3(x) log(1-x)/x dx",
        ),
        (
            "4.15",
            log1p_logm(2),
            quad01(vec![(opt(), 1), (omt(), 2)], Some(t())),
            alternating(h_series(minus_one(), &[(one(), &[1, 1], 2), (one(), &[2], 2)])),
            "int_0^1 log(1+x) log^2(1-x)/x dx",
        ),
        (
            "4.16",
            log1p2_logm(2),
            quad01(vec![(opt(), 2), (omt(), 2)], Some(t())),
            alternating(h_series(
                minus_one(),
                &[
                    (r(2), &[1, 1], 3),
                    (r(2), &[2], 3),
                    (r(-2), &[1, 1, 1], 2),
                    (r(-2), &[1, 2], 2),
                ],
            )),
            "int_0^1 log^2(1+x) log^2(1-x)/x dx",
        ),
        (
            "4.17",
            log1p_over_one_plus(1, 3),
            quad01(vec![(opt(), 1), (t(), 3)], Some(opt())),
            closed("87/16*z5 - 3*z2*z3"),
            "int_0^1 log(1+t) log^3(t)/(1+t) dt",
        ),
    ];
    for (id, series, quadrature, rhs, label) in rows {
        let mut i = Identity::new(id, "integral", series, rhs)
            .quadrature(quadrature)
            .lhs_label(label)
            .tol(1e-30);
        if id == "4.15" || id == "4.16" {
            i = i.rhs_label(match id {
                "4.15" => "sum (-1)^(n-1) (H_n^2 + H_n^(2))/n^2",
                _ => "2 sum (-1)^(n-1) {(H_n^2 + H_n^(2))/n^3 - (H_n^3 + H_n H_n^(2))/n^2}",
            });
        }
        out.push(i);
    }
    out
}

fn alternating_sums() -> Vec<Identity> {
    let quad = alternating_quadrature();
    let rows: [(&str, &[u32], u32, &str, &str); 6] = [
        (
            "4.A1",
            &[1, 1],
            2,
            "41/16*z4 + 1/2*z2*log2^2 - 1/12*log2^4 - 7/4*z3*log2 - 2*li4",
            "sum (-1)^(n-1) H_n^2/n^2",
        ),
        (
            "4.A2",
            &[2],
            2,
            "-51/16*z4 + 4*li4 + 7/2*z3*log2 - z2*log2^2 + 1/6*log2^4",
            "sum (-1)^(n-1) H_n^(2)/n^2",
        ),
        ("4.A3", &[2], 3, "5/8*z2*z3 - 11/32*z5", "sum (-1)^(n-1) H_n^(2)/n^3"),
        (
            "4.A4",
            &[1, 1],
            3,
            "4*li5 + 4*log2*li4 + 2/15*log2^5 + 7/4*z3*log2^2 - 19/32*z5 - 2/3*z2*log2^3 - 11/8*z2*z3",
            "sum (-1)^(n-1) H_n^2/n^3",
        ),
        (
            "4.A5",
            &[1, 1, 1],
            2,
            "6*li5 + 6*log2*li4 + 1/5*log2^5 + 21/8*z3*log2^2 - 9/4*z5 - z2*log2^3 - 27/16*z2*z3",
            "sum (-1)^(n-1) H_n^3/n^2",
        ),
        (
            "4.A6",
            &[1, 2],
            2,
            "-4*li5 - 4*log2*li4 - 2/15*log2^5 - 7/4*z3*log2^2 + 23/8*z5 + 2/3*z2*log2^3 + 15/16*z2*z3",
            "sum (-1)^(n-1) H_n H_n^(2)/n^2",
        ),
    ];
    rows.iter()
        .zip(quad)
        .map(|((id, h, p, cf, label), q)| {
            let lhs = alternating(h_series(minus_one(), &[(one(), h, *p)]));
            Identity::new(*id, "alternating", lhs, closed(cf))
                .quadrature(q)
                .lhs_label(*label)
                .tol(1e-30)
        })
        .collect()
}

/// `H_n L_n(1)` style factor lists; `L_n(q) = -zeta_n(qbar)`.
fn with_l(h: &[u32], l: &[u32]) -> (Rational, Vec<Factor>) {
    let mut f: Vec<Factor> = h.iter().map(|&q| Factor::h(q)).collect();
    f.extend(l.iter().map(|&q| Factor::neg_l(q)));
    let sign = if l.len() % 2 == 0 { 1 } else { -1 };
    (r(sign), f)
}

fn series_of(x: Rational, monos: &[(i64, &[u32], &[u32], u32)]) -> Series {
    let mut s = Series::new(x);
    for (c, h, l, inv) in monos {
        let (sign, f) = with_l(h, l);
        s.add(sign * r(*c), f, *inv);
    }
    s
}

fn relations() -> Vec<Identity> {
    let s14 = s_half(&[1], 4);
    let s23 = s_half(&[2], 3);
    let s32 = s_half(&[3], 2);
    let s41 = s_half(&[4], 1);
    let s113 = s_half(&[1, 1], 3);
    let s1112 = s_half(&[1, 1, 1], 2);
    let s122 = s_half(&[1, 2], 2);
    let li5 = closed("li5");
    let mut out = vec![
        Identity::new(
            "5.13",
            "relation",
            alternating(h_series(minus_one(), &[(one(), &[1], 4)])),
            closed("59/32*z5 - 1/2*z2*z3"),
        )
        .lhs_label("sum (-1)^(n-1) H_n/n^4"),
        Identity::new(
            "5.14",
            "relation",
            Expr::sum(&SumSpec::new(&[1], 4, minus_one()).expect("valid")),
            s14.scale(&r(3))
                + closed(
                    "-6*li5 - 3*li4*log2 - 31/16*z5 + 2*z2*z3 + 3/8*z4*log2 - 3/2*z3*log2^2 \
                     + 1/2*z2*log2^3 - 3/40*log2^5",
                ),
        )
        .lhs_label("sum (-1)^n H_n/n^4"),
    ];
    // sums at x = 1 with alternating harmonic numbers
    let unit = |monos: &[(i64, &[u32], &[u32], u32)]| Expr::series(series_of(one(), monos));
    let alt = |monos: &[(i64, &[u32], &[u32], u32)]| alternating(series_of(minus_one(), monos));
    out.push(
        Identity::new(
            "5.20",
            "relation",
            unit(&[(1, &[1], &[1, 1], 2)]) - alt(&[(2, &[1], &[1], 3)]),
            (s23.clone() + s32.clone()).scale(&r(4)) + closed("4*z3*log2^2 - 5*z5 - z2*z3"),
        )
        .lhs_label("sum H_n L_n(1)^2/n^2 - 2 sum (-1)^(n-1) H_n L_n(1)/n^3")
        .tol(1e-6)
        .terms(UNIT_TERMS),
    );
    let log2 = log2_pow(1);
    let rhs_521 = closed("2*z2*z3")
        + (&log2 * &unit(&[(1, &[1, 1], &[], 2), (1, &[1], &[1], 2)])).scale(&r(2))
        - (&log2 * &(unit(&[(1, &[1], &[], 3)]) + alt(&[(1, &[1], &[], 3)]))).scale(&r(2))
        + alt(&[(2, &[1], &[1], 3)])
        - (&zeta(2) * &unit(&[(1, &[], &[1], 2)])).scale(&r(2))
        + unit(&[(2, &[1], &[1], 3)]);
    let base_521: [(i64, &[u32], &[u32], u32); 3] = [(1, &[1], &[1, 1], 2), (1, &[1, 2], &[], 2), (1, &[1, 1], &[1], 2)];
    let mut corrected = base_521.to_vec();
    corrected.push((1, &[2], &[1], 2));
    let mut literal = base_521.to_vec();
    literal.push((1, &[], &[1, 2], 2));
    out.push(
        Identity::new("5.21", "relation", unit(&corrected), rhs_521.clone())
            .lhs_label("sum (H_n L_n(1)^2 + H_n H_n^(2) + H_n^2 L_n(1) + H_n^(2) L_n(1))/n^2")
            .note("last numerator term read as H_n^(2) L_n(1); the printed L_n(1) L_n(2) is kept as 5.21.literal")
            .tol(1e-6)
            .terms(UNIT_TERMS),
    );
    out.push(
        Identity::new("5.21.literal", "finding", unit(&literal), rhs_521)
            .lhs_label("sum (H_n L_n(1)^2 + H_n H_n^(2) + H_n^2 L_n(1) + L_n(1) L_n(2))/n^2")
            .finding("printed numerator term L_n(1) L_n(2); the sides differ by about 0.2427")
            .tol(1e-6)
            .terms(UNIT_TERMS),
    );
    out.push(Identity::new(
        "5.22",
        "relation",
        s23.clone() + s32.clone(),
        closed("2*li5 - 29/32*z5 + 9/16*z2*z3 + 1/4*z4*log2 - 9/16*z3*log2^2 + 1/6*z2*log2^3 - 1/60*log2^5"),
    ));
    out.push(Identity::new(
        "5.23",
        "relation",
        s23.scale(&r(3)) + s32.clone(),
        closed(
            "-2*li5 - 6*li4*log2 - 3/16*z5 + 55/16*z2*z3 + 1/8*z4*log2 - 55/16*z3*log2^2 \
             + 4/3*z2*log2^3 - 7/30*log2^5",
        ),
    ));
    out.push(Identity::new(
        "5.24",
        "relation",
        s14.scale(&r(2)) + s23.clone() + s32.clone() + s41,
        closed("5*li5 + li4*log2"),
    ));
    let mpl = |idx: &[u32]| Expr::mpl(idx, half());
    let l2 = log2_pow(2);
    out.push(
        Identity::new(
            "5.25",
            "relation",
            (&l2 * &mpl(&[2, 1])).scale(&r(2))
                + (&log2 * &mpl(&[3, 1])).scale(&r(4))
                + mpl(&[4, 1]).scale(&r(4))
                + (&l2 * &mpl(&[1, 1, 1])).scale(&r(2))
                + (&log2 * &mpl(&[2, 1, 1])).scale(&r(4))
                + mpl(&[3, 1, 1]).scale(&r(4)),
            // zeta(3,1,1) = zeta(4,1) by duality
            Expr::mpl(&[4, 1], one()).scale(&r(4)),
        )
        .rhs_label("4 zeta(3,1,1)")
        .tol(1e-12),
    );
    out.push(Identity::new(
        "5.26",
        "relation",
        mpl(&[3, 1, 1]),
        closed("-li5 + 63/32*z5 - 1/2*z2*z3 - z4*log2 + 7/16*z3*log2^2 - 1/12*z2*log2^3 + 1/60*log2^5"),
    ));
    out.push(Identity::new(
        "5.27",
        "relation",
        mpl(&[2, 1, 1, 1]),
        closed("-li5 - li4*log2 + z5 - 7/16*z3*log2^2 + 1/6*z2*log2^3 - 1/24*log2^5"),
    ));
    out.push(Identity::new(
        "5.28",
        "relation",
        mpl(&[3, 1, 1]),
        s113.scale(&half()) - s23.scale(&half()) - s14.clone() + li5.clone(),
    ));
    out.push(Identity::new(
        "5.29",
        "relation",
        mpl(&[2, 1, 1, 1]),
        (s1112.clone() - s122.scale(&r(3)) + s32.scale(&r(2))).scale(&Rational::from((1, 6)))
            - (s113 - s23).scale(&half())
            + s14
            - li5,
    ));
    out.push(Identity::new(
        "5.30",
        "relation",
        s1112 + s122.scale(&r(3)),
        closed(
            "-8*li5 - 6*log2*li4 + 465/32*z5 - 1/2*z2*z3 - 47/8*z4*log2 - 7/4*z3*log2^2 \
             + 5/6*z2*log2^3 - 11/60*log2^5",
        ),
    ));
    let hs = |monos: &[(i64, &[u32], u32)]| {
        let m: Vec<(Rational, &[u32], u32)> = monos.iter().map(|(c, h, p)| (r(*c), *h, *p)).collect();
        Expr::series(h_series(half(), &m))
    };
    out.push(
        Identity::new(
            "5.32",
            "relation",
            hs(&[
                (1, &[1, 1, 1, 1], 1),
                (-6, &[1, 1, 2], 1),
                (8, &[1, 3], 1),
                (3, &[2, 2], 1),
                (-6, &[4], 1),
            ]),
            closed("-24*li5 - 24*log2*li4 + 24*z5 - 21/2*z3*log2^2 + 4*z2*log2^3 - 4/5*log2^5"),
        )
        .lhs_label("sum (H^4 - 6H^2H2 + 8HH3 + 3H2^2 - 6H4)/(n 2^n)"),
    );
    out.push(
        Identity::new(
            "5.33",
            "relation",
            Expr::series(poly_series(half(), &[], &bell_poly(4), 1)),
            closed("45/2*z5"),
        )
        .lhs_label("sum (H^4 + 6H^2H2 + 8HH3 + 3H2^2 + 6H4)/(n 2^n)"),
    );
    out.push(
        Identity::new(
            "5.34",
            "relation",
            hs(&[(1, &[1, 1, 1, 1], 1), (3, &[1, 1, 2], 1), (2, &[1, 3], 1)]),
            closed("279/16*z5 - 21/4*z2*z3"),
        )
        .lhs_label("sum (H^4 + 3H^2H2 + 2HH3)/(n 2^n)"),
    );
    out.push(sum_half(
        "5.35",
        "relation",
        &[1, 3],
        1,
        "3*li5 + 3*log2*li4 - 31/64*z5 - 7/8*z2*z3 + 21/16*z3*log2^2 - 1/2*z2*log2^3 + 1/10*log2^5",
    ));
    out.push(Identity::new(
        "5.35a",
        "relation",
        s_half(&[1, 3], 1),
        s_half(&[3], 2) - log1p2_logm(2).scale(&Rational::from((1, 4))) + (&log2 * &log1p_logm(2)).scale(&half()),
    ));
    // two alternating sums stated without proof
    out.push(
        Identity::new(
            "E1",
            "alternating",
            alt(&[(1, &[1], &[1, 1], 1)]),
            closed("7/4*z2*log2^2 - 1/4*log2^4 + 3/8*z3*log2"),
        )
        .lhs_label("sum (-1)^(n-1) H_n L_n(1)^2/n")
        .tol(1e-6)
        .terms(UNIT_TERMS),
    );
    out.push(
        Identity::new(
            "E2",
            "alternating",
            unit(&[(1, &[1], &[1, 1], 2)]),
            closed("12*li5 - 53/4*z5 + z2*z3 + 9*z4*log2 + z2*log2^3 - 1/10*log2^5"),
        )
        .lhs_label("sum H_n L_n(1)^2/n^2")
        .tol(1e-6)
        .terms(UNIT_TERMS),
    );
    out
}

fn classical() -> Vec<Identity> {
    vec![
        sum_unit("1.S[1;2]", &[1], 2, "2*z3"),
        sum_unit("1.S[3;2]", &[3], 2, "11/2*z5 - 2*z2*z3"),
        sum_unit("1.S[2;4]", &[2], 4, "-1/3*z6 + z3^2"),
        sum_unit("1.S[5;2]", &[5], 2, "11*z7 - 4*z2*z5 - 2*z3*z4"),
        sum_unit("1.S[4;3]", &[4], 3, "-17*z7 + z3*z4 + 10*z2*z5"),
        sum_unit("1.S[4;5]", &[4], 5, "-125/2*z9 + 35*z2*z7 + 5*z4*z5"),
        sum_unit("1.S[2;7]", &[2], 7, "-35/2*z9 + 7*z2*z7 + 2*z3*z6 + 4*z4*z5"),
        sum_unit("1.S[4;7]", &[4], 7, "-329/2*z11 + 84*z2*z9 + 21*z4*z7 + 4*z5*z6")
            .note("leading coefficient read as -329/2; the printed -229/2 is kept as 1.S[4;7].literal"),
        Identity {
            tag: "finding".into(),
            ..sum_unit("1.S[4;7].literal", &[4], 7, "-229/2*z11 + 84*z2*z9 + 21*z4*z7 + 4*z5*z6")
                .finding("printed leading coefficient -229/2; off by 50*zeta(11)")
        },
        sum_unit(
            "1.S[1,2,2;3]",
            &[1, 2, 2],
            3,
            "-6313/288*z8 + 43/2*z3*z5 + 1/2*z2*z3^2 - 17/4*s2_6",
        )
        .tol(1e-5),
        sum_unit(
            "1.S[1,1,2,3;2]",
            &[1, 1, 2, 3],
            2,
            "505/36*z9 + 7/4*z2*z7 + 3*z3*z6 - 37/4*z4*z5 - 5/3*z3^3",
        )
        .tol(1e-5),
        sum_unit(
            "1.S[1,2,2;4]",
            &[1, 2, 2],
            4,
            "-775/36*z9 + 85/8*z2*z7 - 221/24*z3*z6 + 10*z4*z5 + 3*z3^3",
        )
        .tol(1e-5),
    ]
}

fn polylogs() -> Vec<Identity> {
    vec![
        Identity::new("Li2", "polylog", Expr::polylog(2, half()), closed("1/2*z2 - 1/2*log2^2")),
        Identity::new(
            "Li3",
            "polylog",
            Expr::polylog(3, half()),
            closed("7/8*z3 - 1/2*z2*log2 + 1/6*log2^3"),
        ),
    ]
}

fn templates() -> Vec<Identity> {
    standard_params()
        .into_iter()
        .filter_map(|(t, p)| instance(t, &p).ok())
        .collect()
}

/// Orders ids so that numeric runs compare by value (`5.2 < 5.10`).
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(&cb) {
        let o = match (x, y) {
            ((true, u), (true, v)) => {
                let (p, q) = (u.trim_start_matches('0'), v.trim_start_matches('0'));
                p.len().cmp(&q.len()).then(p.cmp(q))
            }
            ((_, u), (_, v)) => u.cmp(v),
        };
        if o != Ordering::Equal {
            return o;
        }
    }
    ca.len().cmp(&cb.len())
}

fn build() -> Vec<Identity> {
    let mut all = Vec::new();
    all.extend(weight_four());
    all.extend(weight_five());
    all.extend(weight_six());
    all.extend(integrals());
    all.extend(alternating_sums());
    all.extend(relations());
    all.extend(classical());
    all.extend(polylogs());
    all.extend(templates());
    all.sort_by(|a, b| natural_cmp(&a.id, &b.id));
    all
}

/// The full built-in catalog, ordered by id.
pub fn registry_catalog() -> Vec<Identity> {
    catalog().to_vec()
}

/// Shared view of the catalog.
pub fn catalog() -> &'static [Identity] {
    static CATALOG: OnceLock<Vec<Identity>> = OnceLock::new();
    CATALOG.get_or_init(build)
}

pub fn lookup(id: &str) -> Option<Identity> {
    catalog().iter().find(|i| i.id == id).cloned()
}

/// Rows of the sum tables: `weight <= 4` gives the low-weight list restricted
/// to that weight bound, higher weights give the sums of exactly that weight.
pub fn table_rows(weight: u32) -> Vec<Identity> {
    registry_catalog()
        .into_iter()
        .filter(|i| i.expectation == Expectation::Holds && i.sum.is_some() && i.closed_form().is_some())
        .filter(|i| {
            let w = i.weight().unwrap_or(0);
            if weight <= 4 {
                i.tag == "weight-4" && w <= weight
            } else {
                i.tag == format!("weight-{weight}") && w == weight
            }
        })
        .collect()
}
