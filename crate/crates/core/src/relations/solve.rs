//! Exact Gaussian elimination with closed-form right-hand sides.

use std::collections::BTreeMap;

use rug::Rational;

use crate::error::{Error, Result};
use crate::symbolic::ClosedForm;

/// One equation `sum coeffs[j] * unknown_j = rhs`.
#[derive(Clone, Debug)]
pub struct Equation {
    pub label: String,
    pub coeffs: Vec<Rational>,
    pub rhs: ClosedForm,
}

/// A linear system over the rationals whose right-hand sides are closed forms.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub unknowns: Vec<String>,
    pub equations: Vec<Equation>,
}

impl LinearSystem {
    pub fn new(unknowns: &[&str]) -> Self {
        LinearSystem {
            unknowns: unknowns.iter().map(|s| s.to_string()).collect(),
            equations: Vec::new(),
        }
    }

    /// Adds an equation given as `(unknown, coefficient)` pairs.
    pub fn equation(&mut self, label: &str, terms: &[(&str, Rational)], rhs: ClosedForm) -> Result<&mut Self> {
        let mut coeffs = vec![Rational::new(); self.unknowns.len()];
        for (name, c) in terms {
            let j = self
                .unknowns
                .iter()
                .position(|u| u == name)
                .ok_or_else(|| Error::NotFound(format!("unknown '{name}'")))?;
            coeffs[j] += c;
        }
        self.equations.push(Equation {
            label: label.to_string(),
            coeffs,
            rhs,
        });
        Ok(self)
    }

    /// `lhs - rhs` of every equation after substituting `solution`.
    pub fn residuals(&self, solution: &BTreeMap<String, ClosedForm>) -> Result<Vec<ClosedForm>> {
        self.equations
            .iter()
            .map(|eq| {
                let mut acc = -eq.rhs.clone();
                for (name, c) in self.unknowns.iter().zip(&eq.coeffs) {
                    if *c != 0 {
                        let v = solution.get(name).ok_or_else(|| Error::NotFound(format!("no value for '{name}'")))?;
                        acc = acc + v.scale(c);
                    }
                }
                Ok(acc)
            })
            .collect()
    }
}

/// Solves the system exactly.
///
/// Extra equations are allowed if they are consistent. A rank-deficient matrix
/// yields [`Error::Singular`] with the null-space dimension.
pub fn solve_exact(system: &LinearSystem) -> Result<BTreeMap<String, ClosedForm>> {
    let n = system.unknowns.len();
    let mut rows: Vec<(Vec<Rational>, ClosedForm)> = system
        .equations
        .iter()
        .map(|eq| {
            if eq.coeffs.len() != n {
                return Err(Error::Domain(format!("equation '{}' has {} coefficients for {n} unknowns", eq.label, eq.coeffs.len())));
            }
            Ok((eq.coeffs.clone(), eq.rhs.clone()))
        })
        .collect::<Result<_>>()?;

    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i].0[col] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = Rational::from(rows[r].0[col].recip_ref());
        let (prow, prhs) = {
            let (c, f) = &rows[r];
            (c.iter().map(|v| Rational::from(v * &inv)).collect::<Vec<_>>(), f.scale(&inv))
        };
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row.0[col] == 0 {
                continue;
            }
            let f = row.0[col].clone();
            for (v, pv) in row.0.iter_mut().zip(&prow) {
                *v -= Rational::from(&f * pv);
            }
            row.1 = &row.1 - &prhs.scale(&f);
        }
        rows[r] = (prow, prhs);
        pivots.push(col);
        r += 1;
    }
    if pivots.len() < n {
        return Err(Error::Singular { nullity: n - pivots.len() });
    }
    if let Some((_, f)) = rows[r..].iter().find(|(_, f)| !f.is_zero()) {
        return Err(Error::Inconsistent(format!("redundant equation reduces to 0 = {f}")));
    }
    Ok(pivots
        .iter()
        .enumerate()
        .map(|(i, &col)| (system.unknowns[col].clone(), rows[i].1.normalized()))
        .collect())
}
