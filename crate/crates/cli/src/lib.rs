//! Argument grammar, registry filters and output records for the `euler-sums` binary.

use std::fmt;
use std::str::FromStr;

use euler_sums::constants::{alt_double_51, alt_zeta, log2, polylog, zeta};
use euler_sums::numeric::{Ball, Precision};
use euler_sums::series::{evaluate, EvalOptions, SumSpec};
use euler_sums::symbolic::{ClosedForm, Expectation, Identity, Status, VerifyResult};
use euler_sums::{Error, Result};
use rug::Rational;
use serde::Serialize;

/// Something `eval` can print an enclosure of.
#[derive(Clone, Debug, PartialEq)]
pub enum Quantity {
    Sum(SumSpec),
    Zeta(u32),
    AltZeta(u32),
    Log2,
    Polylog(u32, Rational),
    AltDouble51,
    Closed(ClosedForm),
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Sum(s) => write!(f, "{s}"),
            Quantity::Zeta(s) => write!(f, "zeta({s})"),
            Quantity::AltZeta(s) => write!(f, "zeta({s}bar)"),
            Quantity::Log2 => f.write_str("log(2)"),
            Quantity::Polylog(k, x) => write!(f, "Li{k}({x})"),
            Quantity::AltDouble51 => f.write_str("zeta(5bar,1)"),
            Quantity::Closed(c) => write!(f, "{c}"),
        }
    }
}

impl Quantity {
    pub fn evaluate(&self, prec: Precision, terms: u64) -> Result<Ball> {
        match self {
            Quantity::Sum(s) => evaluate(&s.to_series(), prec, &EvalOptions::with_terms(terms)),
            Quantity::Zeta(s) => zeta(*s, prec),
            Quantity::AltZeta(s) => alt_zeta(*s, prec),
            Quantity::Log2 => Ok(log2(prec)),
            Quantity::Polylog(k, x) => polylog(*k, x, prec),
            Quantity::AltDouble51 => alt_double_51(prec),
            Quantity::Closed(c) => c.evaluate(prec),
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| usage(format!("'{s}' is not a rational number")))
}

fn parse_u32(s: &str, what: &str) -> Result<u32> {
    s.trim().parse().map_err(|_| usage(format!("{what} '{s}' is not a non-negative integer")))
}

/// Parses the words after `S`: `<h-indices> <p> @<x>`.
///
/// Accepted forms: `1,2 3 @1/2` (indices, then `p`), `1,1 @1/2` (the last entry is `p`),
/// `0-depth p=4 @1/2` (no indices) and `L1 2 @1/2` (an `L` marks an alternating index).
/// The argument may also be given as a separate word after a bare `@`.
pub fn parse_sum(words: &[String]) -> Result<SumSpec> {
    let mut lists: Vec<Vec<String>> = Vec::new();
    let mut outer: Option<u32> = None;
    let mut arg: Option<Rational> = None;
    let mut it = words.iter();
    while let Some(w) = it.next() {
        if let Some(x) = w.strip_prefix('@') {
            let x = if x.is_empty() {
                it.next().ok_or_else(|| usage("missing argument after '@'"))?.as_str()
            } else {
                x
            };
            arg = Some(parse_rational(x)?);
        } else if let Some(v) = w.strip_prefix("p=") {
            outer = Some(parse_u32(v, "exponent")?);
        } else if let Some(d) = w.strip_suffix("-depth") {
            if parse_u32(d, "depth")? != 0 {
                return Err(usage("only '0-depth' may stand in for the index list"));
            }
            lists.push(Vec::new());
        } else {
            lists.push(w.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
        }
    }
    let arg = arg.ok_or_else(|| usage("missing '@<x>'"))?;
    let mut indices: Vec<String> = match (outer, lists.len()) {
        (Some(_), _) => lists.concat(),
        (None, 1) => lists[0].clone(),
        (None, 2) => {
            let [p] = lists[1].as_slice() else {
                return Err(usage("the exponent must be a single integer"));
            };
            outer = Some(parse_u32(p, "exponent")?);
            lists[0].clone()
        }
        (None, _) => return Err(usage("expected 'S <indices> <p> @<x>'")),
    };
    if outer.is_none() {
        let p = indices.pop().ok_or_else(|| usage("missing exponent"))?;
        outer = Some(parse_u32(&p, "exponent")?);
    }
    let (mut h, mut alt) = (Vec::new(), Vec::new());
    for i in &indices {
        match i.strip_prefix('L') {
            Some(v) => alt.push(parse_u32(v, "index")?),
            None => h.push(parse_u32(i, "index")?),
        }
    }
    SumSpec::with_alt(&h, &alt, outer.unwrap_or(0), arg)
}

/// Parses the words given to `eval` or `discover`.
pub fn parse_quantity(words: &[String]) -> Result<Quantity> {
    let (head, rest) = words.split_first().ok_or_else(|| usage("nothing to evaluate"))?;
    let one = |what: &str| -> Result<u32> {
        match rest {
            [s] => parse_u32(s, what),
            _ => Err(usage(format!("expected '{head} <{what}>'"))),
        }
    };
    match head.as_str() {
        "S" => Ok(Quantity::Sum(parse_sum(rest)?)),
        "zeta" => Ok(Quantity::Zeta(one("s")?)),
        "altzeta" | "zetabar" => Ok(Quantity::AltZeta(one("s")?)),
        "log2" if rest.is_empty() => Ok(Quantity::Log2),
        "zb5_1" | "zb51" if rest.is_empty() => Ok(Quantity::AltDouble51),
        "li" | "Li" => match rest {
            [k] => Ok(Quantity::Polylog(parse_u32(k, "order")?, Rational::from((1, 2)))),
            [k, x] => Ok(Quantity::Polylog(parse_u32(k, "order")?, parse_rational(x.trim_start_matches('@'))?)),
            _ => Err(usage("expected 'li <k> [x]'")),
        },
        _ => {
            let text = words.join(" ");
            text.parse::<ClosedForm>()
                .map(Quantity::Closed)
                .map_err(|_| usage(format!("cannot parse '{text}' as a sum, constant or closed form")))
        }
    }
}

/// A weight condition such as `5`, `<=5` or `>3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightFilter {
    pub op: Cmp,
    pub weight: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Le,
    Lt,
    Ge,
    Gt,
}

impl FromStr for WeightFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (op, rest) = [("<=", Cmp::Le), (">=", Cmp::Ge), ("<", Cmp::Lt), (">", Cmp::Gt), ("=", Cmp::Eq)]
            .into_iter()
            .find_map(|(p, op)| s.strip_prefix(p).map(|r| (op, r)))
            .unwrap_or((Cmp::Eq, s));
        Ok(WeightFilter {
            op,
            weight: parse_u32(rest, "weight")?,
        })
    }
}

impl WeightFilter {
    pub fn matches(&self, w: u32) -> bool {
        match self.op {
            Cmp::Eq => w == self.weight,
            Cmp::Le => w <= self.weight,
            Cmp::Lt => w < self.weight,
            Cmp::Ge => w >= self.weight,
            Cmp::Gt => w > self.weight,
        }
    }
}

/// Selects registry entries. Without a tag pattern, entries recorded as findings are left out.
pub struct Selection {
    pub tag: Option<glob::Pattern>,
    pub weight: Option<WeightFilter>,
}

impl Selection {
    pub fn new(tag: Option<&str>, weight: Option<&str>) -> Result<Self> {
        let tag = tag
            .map(|t| glob::Pattern::new(t).map_err(|e| usage(format!("bad tag pattern '{t}': {e}"))))
            .transpose()?;
        let weight = weight.map(str::parse).transpose()?;
        Ok(Selection { tag, weight })
    }

    pub fn matches(&self, i: &Identity) -> bool {
        let tag_ok = match &self.tag {
            Some(p) => p.matches(&i.id) || p.matches(&i.tag),
            None => i.expectation != Expectation::Finding,
        };
        let weight_ok = match self.weight {
            Some(f) => i.weight().is_some_and(|w| f.matches(w)),
            None => true,
        };
        tag_ok && weight_ok
    }
}

/// One verification record.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
    pub status: String,
    pub abs_diff: f64,
    pub radius: f64,
    pub millis: u64,
}

impl Record {
    pub fn new(r: &VerifyResult, stable: bool) -> Self {
        Record {
            id: r.id.clone(),
            lhs: r.lhs.clone(),
            rhs: r.rhs.clone(),
            status: r.status.label().to_string(),
            abs_diff: r.abs_diff,
            radius: r.radius,
            millis: if stable { 0 } else { r.millis },
        }
    }
}

/// Splits `--weight<=5` style arguments into flag and value.
pub fn split_weight_flag(args: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    for a in args {
        match a.strip_prefix("--weight") {
            Some(rest) if rest.starts_with('<') || rest.starts_with('>') => {
                out.push("--weight".to_string());
                out.push(rest.to_string());
            }
            _ => out.push(a),
        }
    }
    out
}

/// Status text for the human-readable table.
pub fn status_text(s: &Status) -> String {
    match s {
        Status::Verified { .. } => "verified".into(),
        other => other.to_string(),
    }
}
