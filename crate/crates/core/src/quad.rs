//! Tanh-sinh quadrature for products of logarithms of linear functions.
//!
//! Results carry a heuristic error estimate (level-to-level difference times
//! 100); they are not certified enclosures.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rug::float::Constant;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::combin::bell_y;
use crate::error::{Error, Result};
use crate::numeric::{Ball, Precision};

/// Highest refinement level; the step is `2^-level`.
pub const MAX_LEVEL: u32 = 12;

/// Safety factor applied to the level difference.
pub const SAFETY: u32 = 100;

/// The linear function `c0 + c1 t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Linear {
    #[serde(with = "crate::series::rational_text")]
    pub c0: Rational,
    #[serde(with = "crate::series::rational_text")]
    pub c1: Rational,
}

impl Linear {
    pub fn new(c0: Rational, c1: Rational) -> Self {
        Linear { c0, c1 }
    }

    /// `t`
    pub fn t() -> Self {
        Linear::new(Rational::new(), Rational::from(1))
    }

    /// `1 - t`
    pub fn one_minus_t() -> Self {
        Linear::new(Rational::from(1), Rational::from(-1))
    }

    /// `1 + t`
    pub fn one_plus_t() -> Self {
        Linear::new(Rational::from(1), Rational::from(1))
    }

    /// `1 - t/2`
    pub fn one_minus_half_t() -> Self {
        Linear::new(Rational::from(1), Rational::from((-1, 2)))
    }

    fn at(&self, t: &Rational) -> Rational {
        Rational::from(&self.c1 * t) + &self.c0
    }
}

impl fmt::Display for Linear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c0 == 0 {
            if self.c1 == 1 {
                return write!(f, "t");
            }
            return write!(f, "{}t", self.c1);
        }
        let sign = if self.c1 < 0 { "-" } else { "+" };
        let a = Rational::from(self.c1.abs_ref());
        if a == 1 {
            write!(f, "{}{}t", self.c0, sign)
        } else {
            write!(f, "{}{}{}t", self.c0, sign, a)
        }
    }
}

/// `t^power * prod log^e(kernel) / divisor` on `[a, b]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LogIntegrand {
    pub factors: Vec<(Linear, u32)>,
    pub divisor: Option<Linear>,
    pub power: u32,
    #[serde(with = "crate::series::rational_text")]
    pub a: Rational,
    #[serde(with = "crate::series::rational_text")]
    pub b: Rational,
}

impl LogIntegrand {
    pub fn new(factors: Vec<(Linear, u32)>, divisor: Option<Linear>, a: Rational, b: Rational) -> Result<Self> {
        let f = LogIntegrand {
            factors,
            divisor,
            power: 0,
            a,
            b,
        };
        f.validate()?;
        Ok(f)
    }

    /// Multiplies the integrand by `t^p`.
    pub fn with_power(mut self, p: u32) -> Self {
        self.power = p;
        self
    }

    /// `int_0^1 prod log^e / divisor dt`.
    pub fn unit(factors: Vec<(Linear, u32)>, divisor: Option<Linear>) -> Result<Self> {
        Self::new(factors, divisor, Rational::new(), Rational::from(1))
    }

    fn validate(&self) -> Result<()> {
        if self.a >= self.b {
            return Err(Error::Domain(format!("empty interval [{}, {}]", self.a, self.b)));
        }
        // logarithm arguments must be positive on the open interval
        for (k, _) in &self.factors {
            let fa = k.at(&self.a);
            let fb = k.at(&self.b);
            if fa < 0 || fb < 0 {
                return Err(Error::Domain(format!("log({k}) is undefined on [{}, {}]", self.a, self.b)));
            }
        }
        if let Some(d) = &self.divisor {
            let fa = d.at(&self.a);
            let fb = d.at(&self.b);
            if (fa < 0) != (fb < 0) && fa != 0 && fb != 0 {
                return Err(Error::Domain(format!("divisor {d} changes sign on the interval")));
            }
        }
        Ok(())
    }

    /// Value at `t = a + offset` or `t = b - offset`; the caller passes the
    /// offset from the nearer endpoint to keep logarithms accurate there.
    fn eval(&self, near_a: bool, offset: &Float, bits: u32) -> Float {
        let lin = |l: &Linear| -> Float {
            // c0 + c1 t evaluated from the nearer endpoint
            let (base, step) = if near_a {
                (l.at(&self.a), l.c1.clone())
            } else {
                (l.at(&self.b), -l.c1.clone())
            };
            let mut v = Float::with_val(bits, offset * &Float::with_val(bits, &step));
            v += &base;
            v
        };
        let t = lin(&Linear::t());
        let mut val = Float::with_val(bits, 1);
        for (k, e) in &self.factors {
            let lg = lin(k).ln();
            for _ in 0..*e {
                val *= &lg;
            }
        }
        if self.power > 0 {
            val *= Float::with_val(bits, rug::ops::Pow::pow(&t, self.power));
        }
        if let Some(d) = &self.divisor {
            val /= lin(d);
        }
        val
    }
}

impl fmt::Display for LogIntegrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.power > 0 {
            parts.push(format!("t^{}", self.power));
        }
        for (k, e) in &self.factors {
            if *e == 1 {
                parts.push(format!("log({k})"));
            } else if *e > 1 {
                parts.push(format!("log^{e}({k})"));
            }
        }
        let num = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
        match &self.divisor {
            Some(d) => write!(f, "int_{}^{} {}/({}) dt", self.a, self.b, num, d),
            None => write!(f, "int_{}^{} {} dt", self.a, self.b, num),
        }
    }
}

/// One abscissa pair `+-u`: `s = 1/(1+e^{2v})` is the distance to the nearer
/// endpoint as a fraction of the width, `w` the weight.
struct Node {
    s: Float,
    w: Float,
}

type NodeTable = Arc<Vec<Node>>;

fn node_cache() -> &'static Mutex<HashMap<(u32, u32), NodeTable>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), NodeTable>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Nodes `u = j h` with `j` odd (all `j >= 1` at level 0); `u = 0` is separate.
fn nodes(level: u32, bits: u32) -> NodeTable {
    if let Some(t) = node_cache().lock().expect("node cache poisoned").get(&(level, bits)) {
        return t.clone();
    }
    let h = Float::with_val(bits, 1) >> level;
    let half_pi = Float::with_val(bits, Constant::Pi) >> 1;
    let cutoff = Float::with_val(bits, 1) >> (bits + 40);
    let (start, step) = if level == 0 { (1u64, 1u64) } else { (1, 2) };
    let mut out = Vec::new();
    let mut j = start;
    loop {
        let u = Float::with_val(bits, &h * j);
        let v = Float::with_val(bits, &half_pi * u.clone().sinh());
        let ev = v.clone().exp();
        let emv = Float::with_val(bits, 1) / &ev;
        let denom = Float::with_val(bits, &ev + &emv);
        // dt/du / (b-a) = 2 (pi/2) cosh u / (e^v + e^-v)^2
        let w = Float::with_val(bits, &half_pi * u.cosh()) * 2u32 / Float::with_val(bits, denom.square_ref());
        let s = Float::with_val(bits, 1) / (Float::with_val(bits, &ev * &ev) + 1u32);
        if w < cutoff {
            break;
        }
        out.push(Node { s, w });
        j += step;
    }
    let t = Arc::new(out);
    node_cache()
        .lock()
        .expect("node cache poisoned")
        .insert((level, bits), t.clone());
    t
}

/// Summary of a quadrature run.
#[derive(Clone, Debug)]
pub struct QuadResult {
    /// Estimate with radius `100 * |I_level - I_{level-1}|`.
    pub value: Ball,
    pub level: u32,
    pub error_estimate: f64,
    /// Always true: tanh-sinh errors are estimated, not proven.
    pub heuristic: bool,
}

fn level_sum(f: &LogIntegrand, level: u32, bits: u32) -> Float {
    let table = nodes(level, bits);
    let width = Float::with_val(bits, Rational::from(&f.b - &f.a));
    let contributions: Vec<Float> = table
        .par_iter()
        .map(|node| {
            let off = Float::with_val(bits, &node.s * &width);
            let left = f.eval(true, &off, bits);
            let right = f.eval(false, &off, bits);
            let mut s = Float::with_val(bits, &left + &right);
            s *= &node.w;
            if s.is_finite() {
                s
            } else {
                Float::with_val(bits, 0)
            }
        })
        .collect();
    let mut acc = Float::with_val(bits, 0);
    for c in contributions {
        acc += c;
    }
    if level == 0 {
        // centre node u = 0: w = (pi/2)*2/4, s = 1/2
        let half = Float::with_val(bits, &width / 2u32);
        let c = f.eval(true, &half, bits);
        let w = Float::with_val(bits, Constant::Pi) / 4u32;
        acc += Float::with_val(bits, c * w);
    }
    acc
}

/// Tanh-sinh estimate using levels `0..=level`.
pub fn integrate(f: &LogIntegrand, prec: Precision, level: u32) -> Result<Ball> {
    Ok(integrate_levels(f, prec, level, None)?.value)
}

/// Refines until the error estimate is below `tol` or `MAX_LEVEL` is reached.
pub fn integrate_to(f: &LogIntegrand, prec: Precision, tol: f64) -> Result<QuadResult> {
    integrate_levels(f, prec, MAX_LEVEL, Some(tol))
}

fn integrate_levels(f: &LogIntegrand, prec: Precision, level: u32, tol: Option<f64>) -> Result<QuadResult> {
    if level == 0 || level > MAX_LEVEL {
        return Err(Error::Domain(format!("quadrature level must be in 1..={MAX_LEVEL}")));
    }
    f.validate()?;
    let bits = prec.bits() + 20;
    let width = Float::with_val(bits, Rational::from(&f.b - &f.a));
    let mut raw = Float::with_val(bits, 0);
    let mut prev: Option<Float> = None;
    let mut diffs: Vec<f64> = Vec::new();
    for l in 0..=level {
        raw += level_sum(f, l, bits);
        let h = Float::with_val(bits, 1) >> l;
        let est = Float::with_val(bits, &raw * &h) * &width;
        if let Some(p) = &prev {
            let d = Float::with_val(bits, &est - p).abs().to_f64();
            diffs.push(d);
            let err = d * f64::from(SAFETY);
            let floor = 2f64.powi(-(prec.bits() as i32));
            let done = match tol {
                Some(t) => err <= t || d <= floor * est.to_f64().abs().max(1.0),
                None => l == level,
            };
            if done {
                return Ok(finish(est, err, l, prec));
            }
        }
        prev = Some(est);
    }
    let last = *diffs.last().unwrap_or(&f64::INFINITY);
    let before = if diffs.len() >= 2 { diffs[diffs.len() - 2] } else { f64::INFINITY };
    if last >= before && last > 1e-10 {
        return Err(Error::Accuracy(format!(
            "tanh-sinh levels stopped converging for {f} (difference {last:.3e})"
        )));
    }
    let est = prev.expect("at least one level");
    let err = last * f64::from(SAFETY);
    if let Some(t) = tol {
        if err > t {
            return Err(Error::Accuracy(format!(
                "tanh-sinh reached level {level} with error estimate {err:.3e} > {t:.3e} for {f}"
            )));
        }
    }
    Ok(finish(est, err, level, prec))
}

fn finish(est: Float, err: f64, level: u32, prec: Precision) -> QuadResult {
    let floor = 2f64.powi(-(prec.bits() as i32)) * est.to_f64().abs().max(1.0);
    let rad = Float::with_val(64, err.max(floor));
    QuadResult {
        value: Ball::from_parts(Float::with_val(prec.bits(), &est), &rad),
        level,
        error_estimate: err,
        heuristic: true,
    }
}

/// `int_0^1 t^{n-1} log^k(1-t) dt`: the exact value `(-1)^k Y_k(n)/n` and
/// the quadrature estimate.
pub fn moment_integral(n: u32, k: u32, prec: Precision) -> Result<(Rational, QuadResult)> {
    if n == 0 || k > 5 {
        return Err(Error::Domain("moment integral needs n >= 1 and k <= 5".into()));
    }
    let mut exact = bell_y(k, n) / Rational::from(n);
    if k % 2 == 1 {
        exact = -exact;
    }
    let factors = if k == 0 { vec![] } else { vec![(Linear::one_minus_t(), k)] };
    let f = LogIntegrand::unit(factors, None)?.with_power(n - 1);
    let tol = 2f64.powi(-(prec.bits() as i32) / 2);
    let q = integrate_to(&f, prec, tol)?;
    Ok((exact, q))
}
