//! Series and quadrature representations of logarithmic integrals and of
//! alternating Euler sums.
//!
//! Series routes expand the integrand in powers of `t` and integrate term by
//! term, which gives certified enclosures. Quadrature routes are independent
//! numerical checks.

use rug::Rational;

use crate::combin::{bell_poly, binomial, factorial, HarmonicPoly, MhsIndex};
use crate::quad::{Linear, LogIntegrand};
use crate::series::{Factor, Series};

use super::closed::{parse_cf, ClosedForm};
use super::expr::Expr;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

pub fn half() -> Rational {
    q(1, 2)
}

fn fact(n: u32) -> Rational {
    Rational::from(factorial(n))
}

fn binom(n: u32, k: u32) -> Rational {
    Rational::from(binomial(n, k))
}

fn sign(e: u32) -> Rational {
    if e % 2 == 0 {
        Rational::from(1)
    } else {
        Rational::from(-1)
    }
}

pub fn log2_pow(e: u32) -> Expr {
    Expr::closed(ClosedForm::log2_pow(e))
}

pub fn closed(s: &str) -> Expr {
    Expr::closed(parse_cf(s))
}

pub fn zeta(s: u32) -> Expr {
    Expr::closed(ClosedForm::zeta(s).expect("s >= 2"))
}

/// `zeta_{n-shift}({1}_k)` as a factor list (empty for `k = 0`).
pub fn ones(k: u32, shift: u32) -> Vec<Factor> {
    if k == 0 {
        vec![]
    } else {
        vec![Factor::new(MhsIndex::ones(k), shift)]
    }
}

/// Series `sum x^n prefix * P(H) / n^inv` for a harmonic polynomial `P`.
pub fn poly_series(x: Rational, prefix: &[Factor], poly: &HarmonicPoly, inv: u32) -> Series {
    let mut s = Series::new(x);
    for (m, c) in &poly.terms {
        let mut factors = prefix.to_vec();
        for (r, e) in m {
            for _ in 0..*e {
                factors.push(Factor::h(*r));
            }
        }
        s.add(c.clone(), factors, inv);
    }
    s
}

/// Series with monomials given as `(coeff, [q...], inv)` in harmonic numbers `H^{(q)}`.
pub fn h_series(x: Rational, monos: &[(Rational, &[u32], u32)]) -> Series {
    let mut s = Series::new(x);
    for (c, hs, inv) in monos {
        s.add(c.clone(), hs.iter().map(|&r| Factor::h(r)).collect(), *inv);
    }
    s
}

/// `sum (-1)^{n-1} a_n` from a series in `(-1)^n`.
pub fn alternating(s: Series) -> Expr {
    -Expr::series(s)
}

/// `int_{1/2}^1 log^a(x) log^b(1-x) / x dx` as a power series in `1/2`.
pub fn half_to_one(a: u32, b: u32) -> Expr {
    let mut out = Expr::zero();
    for l in 0..=b {
        let mut s = Series::new(half());
        s.add(Rational::from(1), ones(a, 1), l + 1);
        // (-log 2)^{b-l}
        let c = sign(a) * fact(a) * fact(l) * binom(b, l) * sign(l) * sign(b - l);
        out = out + (&log2_pow(b - l) * &Expr::series(s)).scale(&c);
    }
    out
}

/// `int_0^{1/2} log^m(1-x)/x dx` as a power series in `1/2`.
pub fn zero_to_half(m: u32) -> Expr {
    let mut s = Series::new(half());
    s.add(Rational::from(1), ones(m - 1, 1), 2);
    Expr::series(s).scale(&(sign(m) * fact(m)))
}

/// `int_0^1 log^m(1-x)/x dx`, split at `1/2`.
pub fn log_one_minus_over_x(m: u32) -> Expr {
    zero_to_half(m) + half_to_one(0, m)
}

/// `int_0^1 log^m(1-x)/(1-x/2) dx = 2 (-1)^m sum Y_m(n)/(n 2^n)`.
pub fn log_over_one_minus_half(m: u32) -> Expr {
    Expr::series(poly_series(half(), &[], &bell_poly(m), 1)).scale(&(sign(m) * Rational::from(2)))
}

/// `int_0^1 log(1+x) log^m(1-x)/x dx = (-1)^m sum (-1)^{n-1} Y_m(n)/n^2`.
pub fn log1p_logm(m: u32) -> Expr {
    alternating(poly_series(Rational::from(-1), &[], &bell_poly(m), 2)).scale(&sign(m))
}

/// `int_0^1 log^2(1+x) log^m(1-x)/x dx
///  = 2 (-1)^{m+1} sum (-1)^{n-1} {H_n Y_m(n)/n^2 - Y_m(n)/n^3}`.
pub fn log1p2_logm(m: u32) -> Expr {
    let y = bell_poly(m);
    let mut s = poly_series(Rational::from(-1), &[Factor::h(1)], &y, 2);
    s.add_series(&Rational::from(-1), &poly_series(Rational::from(-1), &[], &y, 3));
    alternating(s).scale(&(sign(m + 1) * Rational::from(2)))
}

/// `int_0^1 log^j(1+t) log^k(t)/(1+t) dt
///  = (-1)^{k+j} k! j! sum (-1)^{n+1} zeta_{n-1}({1}_j)/n^{k+1}`.
pub fn log1p_over_one_plus(j: u32, k: u32) -> Expr {
    let mut s = Series::new(Rational::from(-1));
    s.add(Rational::from(1), ones(j, 1), k + 1);
    alternating(s).scale(&(sign(k + j) * fact(k) * fact(j)))
}

/// `int_0^1 log^a(1+t) log^k(t)/(1-t) dt`
/// `= (-1)^{a+k} a! k! sum (-1)^n zeta_{n-1}({1}_{a-1}) (zeta(k+1) - H_n^{(k+1)})/n`.
pub fn log1p_over_one_minus(a: u32, k: u32) -> Expr {
    if a == 0 {
        return zeta(k + 1).scale(&(sign(k) * fact(k)));
    }
    let mut s1 = Series::new(Rational::from(-1));
    s1.add(Rational::from(1), ones(a - 1, 1), 1);
    let mut s2 = Series::new(Rational::from(-1));
    let mut f = ones(a - 1, 1);
    f.push(Factor::h(k + 1));
    s2.add(Rational::from(1), f, 1);
    let e = &zeta(k + 1) * &Expr::series(s1) - Expr::series(s2);
    e.scale(&(sign(a + k) * fact(a) * fact(k)))
}

// --- quadrature ---

fn t() -> Linear {
    Linear::t()
}

fn omt() -> Linear {
    Linear::one_minus_t()
}

fn opt() -> Linear {
    Linear::one_plus_t()
}

fn drop_zero(f: Vec<(Linear, u32)>) -> Vec<(Linear, u32)> {
    f.into_iter().filter(|(_, e)| *e > 0).collect()
}

/// `int_0^1 prod log^e(l) / divisor dt` by quadrature.
pub fn quad01(factors: Vec<(Linear, u32)>, divisor: Option<Linear>) -> Expr {
    Expr::integral(LogIntegrand::unit(drop_zero(factors), divisor).expect("valid integrand"))
}

/// `int_a^b prod log^e(l) / divisor dt` by quadrature.
pub fn quad(factors: Vec<(Linear, u32)>, divisor: Option<Linear>, a: Rational, b: Rational) -> Expr {
    Expr::integral(LogIntegrand::new(drop_zero(factors), divisor, a, b).expect("valid integrand"))
}

/// Quadrature form of `int_{1/2}^1 log^a(x) log^b(1-x)/x dx`.
pub fn half_to_one_quad(a: u32, b: u32) -> Expr {
    quad(vec![(t(), a), (omt(), b)], Some(t()), half(), Rational::from(1))
}

/// Quadrature form of `int_0^1 g(t)/(t(1+t)) dt` with `g = prod log^e`.
fn over_t_one_plus_t(factors: Vec<(Linear, u32)>) -> Expr {
    quad01(factors.clone(), Some(t())) - quad01(factors, Some(opt()))
}

/// `sum (-1)^{n-1} H_n/n^k` by quadrature.
pub fn alt_linear_quad(k: u32) -> Expr {
    over_t_one_plus_t(vec![(t(), k - 1), (opt(), 1)]).scale(&(sign(k - 1) / fact(k - 1)))
}

/// Quadrature routes for six alternating sums `sum (-1)^{n-1} a_n`.
/// Returns `(H^2/n^2, H2/n^2, H2/n^3, H^2/n^3, H^3/n^2, H H2/n^2)`.
///
/// The last four need the auxiliary linear sum `sum (-1)^{n-1} H_n^{(3)}/n^2`,
/// which is taken from its certified series.
pub fn alternating_quadrature() -> [Expr; 6] {
    let lam3 = alt_linear_quad(3);
    let lam4 = alt_linear_quad(4);
    let a1 = quad01(vec![(opt(), 2), (omt(), 1)], Some(t())).scale(&half()) + lam3;
    // int log(1+x) log^2(1-x)/x = A1 + A2
    let a2 = quad01(vec![(opt(), 1), (omt(), 2)], Some(t())) - a1.clone();
    // int log(1+x) log^3(1-x)/x = -(A5 + 3 A6 + 2 B1)
    let ia = quad01(vec![(opt(), 1), (omt(), 3)], Some(t()));
    // -int log t log^3(1+t)/(t(1+t)) = A5 - 3 A6 + 2 B1
    let d = -over_t_one_plus_t(vec![(t(), 1), (opt(), 3)]);
    let a6 = (-ia.clone() - d).scale(&q(1, 6));
    let x = -ia - a6.clone().scale(&Rational::from(3));
    // A4 - A3 = -1/2 int log^2 t log^2(1+t)/(t(1+t))
    let z = over_t_one_plus_t(vec![(t(), 2), (opt(), 2)]).scale(&q(-1, 2));
    // B1 + A3 = 5/4 z2 z3 - Lambda_4 - 1/2 int log^2 t log(1-t) log(1+t)/t
    let i6 = quad01(vec![(t(), 2), (omt(), 1), (opt(), 1)], Some(t()));
    let w = closed("5/4*z2*z3") - lam4 - i6.scale(&half());
    let b1 = alternating(h_series(Rational::from(-1), &[(Rational::from(1), &[3], 2)]));
    let a3 = w - b1.clone();
    let a4 = a3.clone() + z;
    let a5 = x - b1.scale(&Rational::from(2));
    [a1, a2, a3, a4, a5, a6]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Precision;
    use crate::symbolic::expr::EvalContext;

    fn ctx() -> EvalContext {
        EvalContext::new(Precision::new(160).unwrap()).with_quad_tol(1e-30)
    }

    #[test]
    fn split_integral_matches_zeta() {
        for m in 1..=3 {
            let v = log_one_minus_over_x(m).evaluate(&ctx()).unwrap();
            let z = zeta(m + 1).scale(&(sign(m) * fact(m))).evaluate(&ctx()).unwrap();
            assert!(v.ball.intersects(&z.ball), "m = {m}");
            assert!(v.ball.mid_distance(&z.ball) < 1e-40);
        }
    }

    #[test]
    fn half_to_one_series_matches_quadrature() {
        let c = ctx();
        for (a, b) in [(1, 2), (2, 1), (0, 3)] {
            let s = half_to_one(a, b).evaluate(&c).unwrap();
            let qv = half_to_one_quad(a, b).evaluate(&c).unwrap();
            assert!(s.ball.mid_distance(&qv.ball) < 1e-25, "({a},{b})");
            assert!(qv.heuristic && !s.heuristic);
        }
    }

    #[test]
    fn one_minus_route_matches_quadrature() {
        let c = ctx();
        for (a, k) in [(1, 1), (2, 2), (1, 3)] {
            let s = log1p_over_one_minus(a, k).evaluate(&c).unwrap();
            let qv = quad01(vec![(opt(), a), (t(), k)], Some(omt())).evaluate(&c).unwrap();
            assert!(s.ball.mid_distance(&qv.ball) < 1e-25, "({a},{k})");
        }
    }
}
