//! Identities between expressions and their numerical verification.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::numeric::Precision;
use crate::series::SumSpec;

use super::closed::ClosedForm;
use super::expr::{EvalContext, Expr};

/// Outcome of a verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Unverified,
    Verified { tol: f64, bits: u32 },
    Failed { discrepancy: f64 },
    Unverifiable { reason: String },
}

impl Status {
    pub fn is_verified(&self) -> bool {
        matches!(self, Status::Verified { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Unverified => "unverified",
            Status::Verified { .. } => "verified",
            Status::Failed { .. } => "failed",
            Status::Unverifiable { .. } => "unverifiable",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Unverified => f.write_str("unverified"),
            Status::Verified { tol, bits } => write!(f, "verified (tol {tol:e}, {bits} bits)"),
            Status::Failed { discrepancy } => write!(f, "failed (discrepancy {discrepancy:.3e})"),
            Status::Unverifiable { reason } => write!(f, "unverifiable: {reason}"),
        }
    }
}

/// How a registry entry is expected to behave.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    /// The identity should verify.
    Holds,
    /// A literal transcription kept for the record; expected to fail.
    Finding,
}

/// An identity `lhs = rhs` together with the data needed to check it.
#[derive(Clone, Debug)]
pub struct Identity {
    pub id: String,
    /// Category label such as `weight-5` or `integral`.
    pub tag: String,
    pub lhs_text: String,
    pub rhs_text: String,
    /// Primary (certified) representation of the left-hand side.
    pub lhs: Expr,
    pub rhs: Expr,
    /// Independent quadrature representation of the left-hand side.
    pub quadrature: Option<Expr>,
    /// The sum on the left, when it is a single Euler-type sum.
    pub sum: Option<SumSpec>,
    /// Default tolerance.
    pub tol: f64,
    /// Term budget for sums at `x = 1`.
    pub terms: Option<u64>,
    pub expectation: Expectation,
    /// Free-text note (reason for a finding, route used, ...).
    pub note: Option<String>,
    /// Parametric instance of a family; excluded from the plain-identity checks.
    pub parametric: bool,
}

impl Identity {
    pub fn new(id: impl Into<String>, tag: impl Into<String>, lhs: Expr, rhs: Expr) -> Self {
        let lhs_text = lhs.to_string();
        let rhs_text = match rhs.as_closed() {
            Some(c) => c.to_string(),
            None => rhs.to_string(),
        };
        Identity {
            id: id.into(),
            tag: tag.into(),
            lhs_text,
            rhs_text,
            lhs,
            rhs,
            quadrature: None,
            sum: None,
            tol: 1e-40,
            terms: None,
            expectation: Expectation::Holds,
            note: None,
            parametric: false,
        }
    }

    /// Identity `S(spec) = cf`.
    pub fn sum_closed(id: impl Into<String>, tag: impl Into<String>, spec: SumSpec, cf: ClosedForm) -> Self {
        let mut out = Identity::new(id, tag, Expr::sum(&spec), Expr::closed(cf));
        out.lhs_text = spec.to_string();
        out.sum = Some(spec);
        out
    }

    pub fn lhs_label(mut self, s: impl Into<String>) -> Self {
        self.lhs_text = s.into();
        self
    }

    pub fn rhs_label(mut self, s: impl Into<String>) -> Self {
        self.rhs_text = s.into();
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn terms(mut self, n: u64) -> Self {
        self.terms = Some(n);
        self
    }

    pub fn quadrature(mut self, e: Expr) -> Self {
        self.quadrature = Some(e);
        self
    }

    pub fn finding(mut self, note: impl Into<String>) -> Self {
        self.expectation = Expectation::Finding;
        self.note = Some(note.into());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn parametric(mut self) -> Self {
        self.parametric = true;
        self
    }

    /// The right-hand side as a closed form, when it is one.
    pub fn closed_form(&self) -> Option<ClosedForm> {
        self.rhs.as_closed()
    }

    /// Weight of the left-hand side, if homogeneous.
    pub fn weight(&self) -> Option<u32> {
        self.lhs.weight()
    }

    /// `Some(true)` if both sides are homogeneous of the same weight.
    pub fn is_homogeneous(&self) -> Option<bool> {
        let l = self.lhs.weight()?;
        Some(self.rhs.weight() == Some(l) || self.rhs.as_closed().is_some_and(|c| c.is_zero()))
    }
}

/// Result of one verification run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyResult {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
    pub status: Status,
    pub abs_diff: f64,
    pub radius: f64,
    pub millis: u64,
    /// Part of the enclosure relies on a heuristic quadrature error estimate.
    pub heuristic: bool,
    pub lhs_value: String,
    pub rhs_value: String,
}

/// Which representation of the left-hand side to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Series,
    Quadrature,
}

fn context(identity: &Identity, prec: Precision, tol: f64) -> EvalContext {
    let mut ctx = EvalContext::new(prec).with_quad_tol((tol * 1e-3).max(f64::MIN_POSITIVE));
    if let Some(n) = identity.terms {
        ctx = ctx.with_terms(n);
    }
    ctx
}

/// Verifies an identity: both sides are evaluated and compared. The identity
/// is verified when the midpoints differ by at most `tol` and the enclosures
/// intersect.
pub fn verify(identity: &Identity, prec: Precision, tol: f64) -> VerifyResult {
    verify_route(identity, prec, tol, Route::Series)
}

pub fn verify_route(identity: &Identity, prec: Precision, tol: f64, route: Route) -> VerifyResult {
    let ctx = context(identity, prec, tol);
    verify_with(identity, &ctx, tol, route)
}

pub fn verify_with(identity: &Identity, ctx: &EvalContext, tol: f64, route: Route) -> VerifyResult {
    let start = Instant::now();
    let mut res = VerifyResult {
        id: identity.id.clone(),
        lhs: identity.lhs_text.clone(),
        rhs: identity.rhs_text.clone(),
        status: Status::Unverified,
        abs_diff: f64::NAN,
        radius: f64::NAN,
        millis: 0,
        heuristic: false,
        lhs_value: String::new(),
        rhs_value: String::new(),
    };
    let lhs_expr = match route {
        Route::Series => &identity.lhs,
        Route::Quadrature => match &identity.quadrature {
            Some(q) => q,
            None => {
                res.status = Status::Unverifiable {
                    reason: "no quadrature route".into(),
                };
                return res;
            }
        },
    };
    let outcome = lhs_expr.evaluate(ctx).and_then(|l| Ok((l, identity.rhs.evaluate(ctx)?)));
    match outcome {
        Ok((l, r)) => {
            let diff = l.ball.mid_distance(&r.ball);
            res.abs_diff = diff;
            res.radius = l.ball.rad_f64() + r.ball.rad_f64();
            res.heuristic = l.heuristic || r.heuristic;
            res.lhs_value = l.ball.to_decimal(50);
            res.rhs_value = r.ball.to_decimal(50);
            res.status = if diff <= tol && l.ball.intersects(&r.ball) {
                Status::Verified {
                    tol,
                    bits: ctx.prec.bits(),
                }
            } else {
                Status::Failed { discrepancy: diff }
            };
        }
        Err(e) => {
            res.status = Status::Unverifiable {
                reason: describe(&e),
            };
        }
    }
    res.millis = start.elapsed().as_millis() as u64;
    res
}

fn describe(e: &Error) -> String {
    e.to_string()
}

/// One line of the structured-text catalog.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
    pub tag: String,
    pub status: String,
}

impl CatalogRecord {
    pub fn from_identity(identity: &Identity, status: Option<&Status>) -> Self {
        CatalogRecord {
            id: identity.id.clone(),
            lhs: identity.lhs_text.clone(),
            rhs: identity.rhs_text.clone(),
            tag: identity.tag.clone(),
            status: status.map_or("unverified", Status::label).to_string(),
        }
    }
}

/// Serializes identities to line-delimited JSON.
pub fn catalog_lines(identities: &[Identity]) -> String {
    identities
        .iter()
        .map(|i| serde_json::to_string(&CatalogRecord::from_identity(i, None)).expect("serializable record"))
        .collect::<Vec<_>>()
        .join("\n")
}
