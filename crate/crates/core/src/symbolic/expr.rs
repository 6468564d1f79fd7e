//! Expressions over evaluable quantities: sums, integrals, polylogarithms and
//! closed forms, combined with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;

use crate::combin::MhsIndex;
use crate::constants;
use crate::error::{Error, Result};
use crate::numeric::{Ball, Precision};
use crate::quad::{self, LogIntegrand};
use crate::series::{self, EvalOptions, Series, SumSpec};

use super::closed::{ClosedForm, Weight};

/// A single evaluable quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// Certified power series (any `x` supported by the series engine).
    Sum(Series),
    /// Integral of logarithms, evaluated by quadrature (heuristic error).
    Integral(LogIntegrand),
    /// Exact closed form over the constant basis.
    Closed(ClosedForm),
    /// `log(q)` for a positive rational.
    Log(Rational),
    /// `Li_k(x)` for a rational with `|x| <= 3/4`.
    Polylog(u32, Rational),
}

impl Quantity {
    pub fn weight(&self) -> Option<u32> {
        match self {
            Quantity::Sum(s) => series_weight(s),
            Quantity::Integral(f) => {
                if f.power != 0 || f.divisor.is_none() {
                    return None;
                }
                Some(f.factors.iter().map(|(_, e)| *e).sum::<u32>() + 1)
            }
            Quantity::Closed(c) => match c.weight() {
                Weight::Exact(w) => Some(w),
                Weight::Mixed => None,
            },
            Quantity::Log(_) => Some(1),
            Quantity::Polylog(k, _) => Some(*k),
        }
    }

    fn is_heuristic(&self) -> bool {
        matches!(self, Quantity::Integral(_))
    }
}

/// Common weight of all monomials of a series, if homogeneous.
pub fn series_weight(s: &Series) -> Option<u32> {
    let mut w = None;
    for m in s.terms.keys() {
        let mw = m.inv + m.factors.iter().map(|f| f.idx.weight()).sum::<u32>();
        match w {
            None => w = Some(mw),
            Some(v) if v != mw => return None,
            _ => {}
        }
    }
    w
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Sum(s) => write!(f, "{s}"),
            Quantity::Integral(i) => write!(f, "{i}"),
            Quantity::Closed(c) => write!(f, "({c})"),
            Quantity::Log(q) => write!(f, "log({q})"),
            Quantity::Polylog(k, x) => write!(f, "Li{k}({x})"),
        }
    }
}

/// Evaluation settings shared by all quantities of an expression.
#[derive(Clone, Debug)]
pub struct EvalContext {
    pub prec: Precision,
    pub opts: EvalOptions,
    /// Target error for quadrature.
    pub quad_tol: f64,
}

impl EvalContext {
    pub fn new(prec: Precision) -> Self {
        EvalContext {
            prec,
            opts: EvalOptions::default(),
            quad_tol: 2f64.powi(-(prec.bits().min(1000) as i32) / 2),
        }
    }

    pub fn with_terms(mut self, terms: u64) -> Self {
        self.opts.terms = terms;
        self
    }

    pub fn with_quad_tol(mut self, tol: f64) -> Self {
        self.quad_tol = tol;
        self
    }
}

/// Enclosure together with a flag telling whether any part of it relies on a
/// heuristic (non-rigorous) error estimate.
#[derive(Clone, Debug)]
pub struct Value {
    pub ball: Ball,
    pub heuristic: bool,
}

fn eval_quantity(q: &Quantity, ctx: &EvalContext) -> Result<Ball> {
    match q {
        Quantity::Sum(s) => series::evaluate(s, ctx.prec, &ctx.opts),
        Quantity::Integral(f) => Ok(quad::integrate_to(f, ctx.prec, ctx.quad_tol)?.value),
        Quantity::Closed(c) => c.evaluate(ctx.prec),
        Quantity::Log(x) => {
            if *x <= 0 {
                return Err(Error::Domain(format!("log of non-positive {x}")));
            }
            if *x == 2 {
                return Ok(constants::log2(ctx.prec));
            }
            Ball::from_rational(x, ctx.prec.guarded(16)).log().map(|b| b.with_prec(ctx.prec))
        }
        Quantity::Polylog(k, x) => constants::polylog(*k, x, ctx.prec),
    }
}

/// One product term `coeff * prod factors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub factors: Vec<Quantity>,
}

/// Rational linear combination of products of quantities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        Expr::closed(ClosedForm::constant(c))
    }

    pub fn quantity(q: Quantity) -> Self {
        Expr {
            terms: vec![Term {
                coeff: Rational::from(1),
                factors: vec![q],
            }],
        }
    }

    pub fn closed(c: ClosedForm) -> Self {
        Expr::quantity(Quantity::Closed(c))
    }

    pub fn series(s: Series) -> Self {
        Expr::quantity(Quantity::Sum(s))
    }

    pub fn sum(spec: &SumSpec) -> Self {
        Expr::series(spec.to_series())
    }

    /// `zeta(s_1, ..., s_k; x)`.
    pub fn mpl(idx: &[u32], x: Rational) -> Self {
        Expr::series(Series::multiple_polylog(&MhsIndex::plain(idx), x))
    }

    pub fn integral(f: LogIntegrand) -> Self {
        Expr::quantity(Quantity::Integral(f))
    }

    pub fn log(x: Rational) -> Self {
        Expr::quantity(Quantity::Log(x))
    }

    pub fn polylog(k: u32, x: Rational) -> Self {
        Expr::quantity(Quantity::Polylog(k, x))
    }

    pub fn pow(&self, e: u32) -> Expr {
        let mut out = Expr::constant(1);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: Rational::from(&t.coeff * c),
                    factors: t.factors.clone(),
                })
                .filter(|t| t.coeff != 0)
                .collect(),
        }
    }

    /// The closed form, if the expression consists of closed forms only.
    pub fn as_closed(&self) -> Option<ClosedForm> {
        let mut out = ClosedForm::zero();
        for t in &self.terms {
            let mut p = ClosedForm::constant(t.coeff.clone());
            for f in &t.factors {
                match f {
                    Quantity::Closed(c) => p = &p * c,
                    _ => return None,
                }
            }
            out = out + p;
        }
        Some(out)
    }

    /// Common weight of all terms, if homogeneous.
    pub fn weight(&self) -> Option<u32> {
        let mut w = None;
        for t in &self.terms {
            let mut tw = 0;
            for f in &t.factors {
                tw += f.weight()?;
            }
            // a zero closed form carries no weight
            if t.factors.iter().any(|f| matches!(f, Quantity::Closed(c) if c.is_zero())) {
                continue;
            }
            match w {
                None => w = Some(tw),
                Some(v) if v != tw => return None,
                _ => {}
            }
        }
        w
    }

    pub fn is_heuristic(&self) -> bool {
        self.terms.iter().any(|t| t.factors.iter().any(Quantity::is_heuristic))
    }

    pub fn evaluate(&self, ctx: &EvalContext) -> Result<Value> {
        let prec = ctx.prec;
        let mut acc = Ball::zero(prec);
        for t in &self.terms {
            let mut p = Ball::one(prec);
            for f in &t.factors {
                p = p.mul_ball(&eval_quantity(f, ctx)?);
            }
            acc = acc + p.mul_rational(&t.coeff);
        }
        Ok(Value {
            ball: acc,
            heuristic: self.is_heuristic(),
        })
    }
}

impl From<ClosedForm> for Expr {
    fn from(c: ClosedForm) -> Expr {
        Expr::closed(c)
    }
}

impl From<Quantity> for Expr {
    fn from(q: Quantity) -> Expr {
        Expr::quantity(q)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(mut self, o: Expr) -> Expr {
        self.terms.extend(o.terms);
        self
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;
    fn add(self, o: &Expr) -> Expr {
        self.clone() + o.clone()
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(&Rational::from(-1))
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, o: Expr) -> Expr {
        self + (-o)
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;
    fn mul(self, o: &Expr) -> Expr {
        let mut out = Expr::zero();
        for a in &self.terms {
            for b in &o.terms {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                // keep at most one closed-form factor per product
                let (closed, mut rest): (Vec<Quantity>, Vec<Quantity>) =
                    factors.into_iter().partition(|q| matches!(q, Quantity::Closed(_)));
                if !closed.is_empty() {
                    let mut c = ClosedForm::constant(1);
                    for q in closed {
                        if let Quantity::Closed(x) = q {
                            c = &c * &x;
                        }
                    }
                    if c != ClosedForm::constant(1) || rest.is_empty() {
                        rest.insert(0, Quantity::Closed(c));
                    }
                }
                out.terms.push(Term {
                    coeff: Rational::from(&a.coeff * &b.coeff),
                    factors: rest,
                });
            }
        }
        out
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, o: Expr) -> Expr {
        &self * &o
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let fs: Vec<String> = t.factors.iter().map(|q| q.to_string()).collect();
                if fs.is_empty() {
                    t.coeff.to_string()
                } else if t.coeff == 1 {
                    fs.join("*")
                } else {
                    format!("{}*{}", t.coeff, fs.join("*"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::closed::parse_cf;

    #[test]
    fn product_of_polylogs_has_additive_weight() {
        let e = &Expr::polylog(2, Rational::from((1, 2))) * &Expr::polylog(3, Rational::from((1, 2)));
        assert_eq!(e.weight(), Some(5));
        let s = Expr::sum(&SumSpec::half(&[1, 2], 2));
        assert_eq!(s.weight(), Some(5));
        assert_eq!((s + e).weight(), Some(5));
    }

    #[test]
    fn li2_half_matches_closed_form() {
        let ctx = EvalContext::new(Precision::new(192).unwrap());
        let lhs = Expr::polylog(2, Rational::from((1, 2))).evaluate(&ctx).unwrap();
        let rhs = Expr::closed(parse_cf("1/2*z2 - 1/2*log2^2")).evaluate(&ctx).unwrap();
        assert!(lhs.ball.intersects(&rhs.ball));
        assert!(lhs.ball.mid_distance(&rhs.ball) < 1e-50);
        assert!(!lhs.heuristic);
    }

    #[test]
    fn closed_products_collapse() {
        let a = Expr::closed(parse_cf("z2"));
        let b = Expr::closed(parse_cf("2*log2"));
        let p = &a * &b;
        assert_eq!(p.as_closed(), Some(parse_cf("2*z2*log2")));
    }

    #[test]
    fn log_of_rational() {
        let ctx = EvalContext::new(Precision::new(128).unwrap());
        let v = Expr::log(Rational::from((3, 4))).evaluate(&ctx).unwrap();
        assert!((v.ball.mid_f64() - 0.75f64.ln()).abs() < 1e-15);
    }
}
