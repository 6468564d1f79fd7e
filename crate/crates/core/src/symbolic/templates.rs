//! Parametric identity families and their instances.
//!
//! Each template turns a parameter list into an [`Identity`]. Parameters are
//! rationals so that the same entry point serves integer indices and
//! arguments such as `x = -1/2`.

use std::fmt;
use std::str::FromStr;

use rug::Rational;

use crate::combin::{bell_poly, binomial, factorial, MhsIndex};
use crate::error::{Error, Result};
use crate::numeric::Precision;
use crate::series::{Factor, Series, SumSpec};

use super::closed::ClosedForm;
use super::expr::Expr;
use super::identity::{verify, Identity, VerifyResult};
use super::routes::{
    half, half_to_one, log1p2_logm, log1p_logm, log1p_over_one_minus, log1p_over_one_plus, log2_pow,
    ones, poly_series, quad, quad01, zeta,
};
use crate::quad::Linear;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Template {
    /// `Li_s(x) Li_t(x)` as a combination of linear sums; params `(s, t)`.
    T2_1,
    /// Duality-type relation for `zeta(m+1, {1}_k)`; params `(m, k)`.
    T2_2,
    /// `zeta(2, {1}_m; 1/2)` in polylogarithms; param `m`.
    T2_3,
    /// `S_{1,m+1}(-1)` through integrals over `[1/2, 1]`; param `m`.
    T3_1,
    /// `int_0^x log^m(1-t)/(1+t) dt`; params `(x, m)`.
    T3_2,
    /// Generating function of `zeta_{m-1}(2) - L_{m-1}(1)^2`; param `x`.
    T3_3,
    /// Stirling-Bell sums against `log(1+t)/(1+t)` integrals; params `(m, k)`.
    T3_4,
    /// Stirling-Bell sums against `log(1+t)/(1-t)` integrals; params `(m, k)`.
    T3_5,
    /// `sum H_n H_n^{(m+1)}/(n 2^n)`; param `m`.
    T3_6,
    /// Shifted Stirling sums as multiple polylogarithms; params `(k, m)`.
    T5_31,
    /// `S_{2n-1,1}(z)` in polylogarithms; params `(n, z)`.
    TS21,
    /// Euler's formula for `S_{1,k}`; param `k`.
    S1k,
}

impl Template {
    pub const ALL: [Template; 12] = [
        Template::T2_1,
        Template::T2_2,
        Template::T2_3,
        Template::T3_1,
        Template::T3_2,
        Template::T3_3,
        Template::T3_4,
        Template::T3_5,
        Template::T3_6,
        Template::T5_31,
        Template::TS21,
        Template::S1k,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Template::T2_1 => "T2.1",
            Template::T2_2 => "T2.2",
            Template::T2_3 => "T2.3",
            Template::T3_1 => "T3.1",
            Template::T3_2 => "T3.2",
            Template::T3_3 => "T3.3",
            Template::T3_4 => "T3.4",
            Template::T3_5 => "T3.5",
            Template::T3_6 => "T3.6",
            Template::T5_31 => "T5.31",
            Template::TS21 => "TS21",
            Template::S1k => "S_1k",
        }
    }

    /// Parameter names in order.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            Template::T2_1 => &["s", "t"],
            Template::T2_2 | Template::T3_4 | Template::T3_5 => &["m", "k"],
            Template::T2_3 | Template::T3_1 | Template::T3_6 => &["m"],
            Template::T3_2 => &["x", "m"],
            Template::T3_3 => &["x"],
            Template::T5_31 => &["k", "m"],
            Template::TS21 => &["n", "z"],
            Template::S1k => &["k"],
        }
    }

    /// Default tolerance for instances.
    pub fn default_tol(self) -> f64 {
        match self {
            Template::T2_2 => 1e-12,
            Template::S1k => 1e-6,
            _ => 1e-25,
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Template {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Template::ALL
            .iter()
            .copied()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown template {s:?}")))
    }
}

fn int_param(t: Template, p: &Rational, name: &str, min: u32, max: u32) -> Result<u32> {
    if !p.is_integer() || *p < min || *p > max {
        return Err(Error::Unsupported(format!(
            "{t}: parameter {name} = {p} outside the supported range {min}..={max}"
        )));
    }
    Ok(p.numer().to_u32().expect("checked range"))
}

fn rq(n: i64) -> Rational {
    Rational::from(n)
}

fn fact(n: u32) -> Rational {
    Rational::from(factorial(n))
}

fn binom(n: u32, k: u32) -> Rational {
    Rational::from(binomial(n, k))
}

fn sign(e: u32) -> Rational {
    if e % 2 == 0 {
        rq(1)
    } else {
        rq(-1)
    }
}

fn mpl_ones(first: u32, k: u32, x: Rational) -> Expr {
    let mut idx = vec![first];
    idx.extend(std::iter::repeat_n(1, k as usize));
    Expr::mpl(&idx, x)
}

fn falling(m: u32, l: u32) -> Rational {
    (0..l).fold(rq(1), |acc, i| acc * rq(i64::from(m - i)))
}

/// Builds the instance of `template` at `params`.
pub fn instance(template: Template, params: &[Rational]) -> Result<Identity> {
    let names = template.params();
    if params.len() != names.len() {
        return Err(Error::Domain(format!(
            "{template} takes {} parameter(s) ({}), got {}",
            names.len(),
            names.join(", "),
            params.len()
        )));
    }
    let label = names
        .iter()
        .zip(params)
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(",");
    let id = format!("{template}[{label}]");
    let mut out = build(template, params, &id)?;
    out.tol = template.default_tol();
    Ok(out.parametric())
}

fn build(t: Template, p: &[Rational], id: &str) -> Result<Identity> {
    Ok(match t {
        Template::T2_1 => {
            let s = int_param(t, &p[0], "s", 1, 6)?;
            let tt = int_param(t, &p[1], "t", 1, 6)?;
            let w = s + tt;
            let x = half();
            let lhs = &Expr::polylog(s, x.clone()) * &Expr::polylog(tt, x.clone());
            let mut rhs = Expr::zero();
            let mut total = rq(0);
            for j in 1..=s {
                let a = binom(w - j - 1, s - j);
                rhs = rhs + Expr::sum(&SumSpec::new(&[j], w - j, x.clone())?).scale(&a);
                total += a;
            }
            for j in 1..=tt {
                let b = binom(w - j - 1, tt - j);
                rhs = rhs + Expr::sum(&SumSpec::new(&[j], w - j, x.clone())?).scale(&b);
                total += b;
            }
            rhs = rhs - Expr::polylog(w, x).scale(&total);
            Identity::new(id, "template", lhs, rhs).lhs_label(format!("Li{s}(1/2)*Li{tt}(1/2)"))
        }
        Template::T2_2 => {
            let m = int_param(t, &p[0], "m", 1, 3)?;
            let k = int_param(t, &p[1], "k", 1, 3)?;
            let mut lhs = Expr::zero();
            for l in 0..=k {
                let c = fact(m) * fact(l) * binom(k, l);
                lhs = lhs + (&log2_pow(k - l) * &mpl_ones(l + 2, m - 1, half())).scale(&c);
            }
            for l in 0..=m {
                let c = fact(k) * fact(l) * binom(m, l);
                lhs = lhs + (&log2_pow(m - l) * &mpl_ones(l + 1, k, half())).scale(&c);
            }
            // zeta(m+1, {1}_k) = zeta(k+2, {1}_{m-1}); take the shallower side
            let (first, rest) = if m < k + 1 { (k + 2, m - 1) } else { (m + 1, k) };
            let mzv = if rest == 0 { zeta(first) } else { mpl_ones(first, rest, rq(1)) };
            Identity::new(id, "template", lhs, mzv.scale(&(fact(m) * fact(k))))
                .rhs_label(format!("{m}!{k}! zeta({}{})", m + 1, ",1".repeat(k as usize)))
        }
        Template::T2_3 => {
            let m = int_param(t, &p[0], "m", 0, 6)?;
            let lhs = mpl_ones(2, m, half());
            let mut rhs = zeta(m + 2);
            for l in 0..=m + 1 {
                let c = rq(1) / fact(m + 1 - l);
                rhs = rhs - (&log2_pow(m + 1 - l) * &Expr::polylog(l + 1, half())).scale(&c);
            }
            Identity::new(id, "template", lhs, rhs)
        }
        Template::T3_1 => {
            let m = int_param(t, &p[0], "m", 0, 5)?;
            let lhs = Expr::sum(&SumSpec::new(&[1], m + 1, rq(-1))?);
            let mut rhs = Expr::series(Series::polylog(m + 2, rq(-1)));
            rhs = rhs - log2_pow(m + 2).scale(&(sign(m + 1) / (fact(m) * rq(i64::from(m + 2)))));
            for k in 1..=m {
                let c = binom(m, k) * sign(k) / fact(m);
                rhs = rhs - half_to_one(m - k + 1, k).scale(&c);
            }
            Identity::new(id, "template", lhs, rhs)
        }
        Template::T3_2 => {
            let x = p[0].clone();
            let m = int_param(t, &p[1], "m", 1, 4)?;
            if x.clone().abs() > Rational::from((3, 4)) {
                return Err(Error::Unsupported(format!("{t}: x = {x} outside [-3/4, 3/4]")));
            }
            let factors = vec![(Linear::one_minus_t(), m)];
            let lhs = if x == 0 {
                Expr::zero()
            } else if x > 0 {
                quad(factors, Some(Linear::one_plus_t()), rq(0), x.clone())
            } else {
                -quad(factors, Some(Linear::one_plus_t()), x.clone(), rq(0))
            };
            let one_minus = Rational::from(1 - x.clone());
            let arg = Rational::from(&one_minus / 2);
            let log1m = Expr::log(one_minus.clone());
            let mut rhs = Expr::polylog(m + 1, half()).scale(&(sign(m) * fact(m)));
            rhs = rhs + &log1m.pow(m) * &Expr::log(Rational::from((1 + x.clone()) / 2));
            for l in 1..=m {
                let c = sign(l + 1) * falling(m, l);
                rhs = rhs + (&log1m.pow(m - l) * &Expr::polylog(l + 1, arg.clone())).scale(&c);
            }
            Identity::new(id, "template", lhs, rhs)
        }
        Template::T3_3 => {
            let x = p[0].clone();
            if x.clone().abs() > Rational::from((1, 2)) {
                return Err(Error::Unsupported(format!("{t}: x = {x} outside [-1/2, 1/2]")));
            }
            let mut s = Series::new(x.clone());
            s.add(rq(1), vec![Factor::new(MhsIndex::plain(&[2]), 1)], 1);
            let l = Factor::new(MhsIndex::bar(1), 1);
            s.add(rq(-1), vec![l.clone(), l], 1);
            let one_minus = Rational::from(1 - x.clone());
            let arg = Rational::from(&one_minus / 2);
            let rhs = (Expr::polylog(3, arg.clone()) - Expr::polylog(3, half())).scale(&rq(4))
                - (&Expr::log(one_minus) * &(Expr::polylog(2, arg) + Expr::polylog(2, half()))).scale(&rq(2));
            Identity::new(id, "template", Expr::series(s), rhs)
                .lhs_label(format!("sum x^m/m (zeta_(m-1)(2) - zeta_(m-1)(1bar)^2) @ x={x}"))
        }
        Template::T3_4 => {
            let m = int_param(t, &p[0], "m", 0, 4)?;
            let k = int_param(t, &p[1], "k", 1, 4)?;
            let mut series_side = Expr::zero();
            let mut quad_side = Expr::zero();
            let pre = sign(k) / fact(m);
            for j in 0..=m {
                let c = &pre * sign(j) * binom(m, j);
                let lg = log2_pow(m - j);
                series_side = series_side + (&lg * &log1p_over_one_plus(j, k)).scale(&c);
                let q = quad01(
                    vec![(Linear::one_plus_t(), j), (Linear::t(), k)],
                    Some(Linear::one_plus_t()),
                );
                quad_side = quad_side + (&lg * &q).scale(&c);
            }
            let rhs = Expr::series(poly_series(half(), &ones(m, 1), &bell_poly(k), 1));
            Identity::new(id, "template", series_side, rhs)
                .quadrature(quad_side)
                .lhs_label(format!(
                    "(-1)^{k}/{m}! sum_j (-1)^j C({m},j) log^({m}-j)2 int log^j(1+t) log^{k}(t)/(1+t)"
                ))
                .rhs_label(format!("sum zeta_(n-1)({{1}}_{m}) Y_{k}(n)/(n 2^n)"))
        }
        Template::T3_5 => {
            if p[0] == 0 {
                return Err(Error::Unsupported(format!("{t}: needs m >= 1")));
            }
            let m = int_param(t, &p[0], "m", 1, 4)?;
            let k = int_param(t, &p[1], "k", 1, 4)?;
            let mut series_side = Expr::zero();
            let mut quad_side = Expr::zero();
            for j in 0..=m {
                let c = sign(j) * binom(m, j);
                let lg = log2_pow(j);
                series_side = series_side + (&lg * &log1p_over_one_minus(m - j, k)).scale(&c);
                let q = quad01(
                    vec![(Linear::one_plus_t(), m - j), (Linear::t(), k)],
                    Some(Linear::one_minus_t()),
                );
                quad_side = quad_side + (&lg * &q).scale(&c);
            }
            let rhs = Expr::series(poly_series(half(), &ones(m - 1, 1), &bell_poly(k), 2))
                .scale(&(sign(m + k) * fact(m)));
            Identity::new(id, "template", series_side, rhs)
                .quadrature(quad_side)
                .lhs_label(format!(
                    "sum_j (-1)^j C({m},j) log^j 2 int log^({m}-j)(1+t) log^{k}(t)/(1-t)"
                ))
                .rhs_label(format!("(-1)^({m}+{k}) {m}! sum zeta_(n-1)({{1}}_{}) Y_{k}(n)/(n^2 2^n)", m - 1))
        }
        Template::T3_6 => {
            let m = int_param(t, &p[0], "m", 1, 3)?;
            let lhs = Expr::sum(&SumSpec::half(&[1, m + 1], 1));
            let c14 = sign(m + 1) / (rq(2) * fact(m));
            let c13 = sign(m + 1) / fact(m);
            let rhs = Expr::sum(&SumSpec::half(&[m + 1], 2)) + log1p2_logm(m).scale(&c14)
                - (&log2_pow(1) * &log1p_logm(m)).scale(&c13);
            Identity::new(id, "template", lhs, rhs)
        }
        Template::T5_31 => {
            let k = int_param(t, &p[0], "k", 2, 6)?;
            let m = int_param(t, &p[1], "m", 1, 4)?;
            let mut s = Series::new(half());
            s.add(rq(1), ones(k - 1, 0), m);
            let rhs = mpl_ones(m + 1, k - 2, half()) + mpl_ones(m, k - 1, half());
            Identity::new(id, "template", Expr::series(s), rhs)
                .lhs_label(format!("sum s(n+1,{k})/(n! n^{m} 2^n)"))
        }
        Template::TS21 => {
            let n = int_param(t, &p[0], "n", 1, 4)?;
            let z = p[1].clone();
            if z.clone().abs() > Rational::from((1, 2)) {
                return Err(Error::Unsupported(format!("{t}: z = {z} outside [-1/2, 1/2]")));
            }
            let lhs = Expr::sum(&SumSpec::new(&[2 * n - 1], 1, z.clone())?);
            let mut rhs = Expr::polylog(2 * n, z.clone());
            for k in 1..2 * n {
                let c = sign(k + 1) / rq(2);
                rhs = rhs + (&Expr::polylog(k, z.clone()) * &Expr::polylog(2 * n - k, z.clone())).scale(&c);
            }
            Identity::new(id, "template", lhs, rhs)
        }
        Template::S1k => {
            let k = int_param(t, &p[0], "k", 2, 10)?;
            let lhs = Expr::sum(&SumSpec::new(&[1], k, rq(1))?);
            let mut cf = ClosedForm::zeta(k + 1)?.scale(&rq(i64::from(k + 2)));
            for i in 1..=k.saturating_sub(2) {
                cf = cf - ClosedForm::zeta(k - i)? * ClosedForm::zeta(i + 1)?;
            }
            Identity::new(id, "classical", lhs, Expr::closed(cf.scale(&Rational::from((1, 2))))).terms(1_000_000)
        }
    })
}

/// Builds and verifies one template instance.
pub fn check_relation(template: Template, params: &[Rational], prec: Precision, tol: f64) -> Result<VerifyResult> {
    let identity = instance(template, params)?;
    Ok(verify(&identity, prec, tol))
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rq(x)).collect()
}

/// The parameter sets exercised by the acceptance suite.
pub fn standard_params() -> Vec<(Template, Vec<Rational>)> {
    let mut out = Vec::new();
    for (s, t) in [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (1, 4)] {
        out.push((Template::T2_1, ints(&[s, t])));
    }
    for (m, k) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        out.push((Template::T2_2, ints(&[m, k])));
    }
    for m in 0..=4 {
        out.push((Template::T2_3, ints(&[m])));
    }
    for m in 0..=4 {
        out.push((Template::T3_1, ints(&[m])));
    }
    for x in [(-1, 2), (0, 1), (1, 2)] {
        for m in 1..=2 {
            out.push((Template::T3_2, vec![Rational::from(x), rq(m)]));
        }
    }
    for x in [(-1, 2), (1, 4), (1, 2)] {
        out.push((Template::T3_3, vec![Rational::from(x)]));
    }
    for (m, k) in [(0, 4), (1, 3), (1, 1), (2, 2)] {
        out.push((Template::T3_4, ints(&[m, k])));
        out.push((Template::T3_5, ints(&[m, k])));
    }
    for m in 1..=2 {
        out.push((Template::T3_6, ints(&[m])));
    }
    for (k, m) in [(5, 1), (3, 2)] {
        out.push((Template::T5_31, ints(&[k, m])));
    }
    for n in 2..=3 {
        out.push((Template::TS21, vec![rq(n), half()]));
    }
    for k in 2..=7 {
        out.push((Template::S1k, ints(&[k])));
    }
    out
}
