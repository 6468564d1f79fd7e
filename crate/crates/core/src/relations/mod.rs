//! Integer-relation discovery over the constant basis and exact derivations.

pub mod derivations;
pub mod pslq;
pub mod solve;

use std::fmt;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::{Ball, Precision};
use crate::series::{self, SumSpec};
use crate::symbolic::{Atom, ClosedForm, Monomial};

pub use derivations::{derivations, Derivation};
pub use pslq::{pslq, PslqOutcome, RelationProblem};
pub use solve::{solve_exact, Equation, LinearSystem};

/// Largest weight with a basis.
pub const MAX_WEIGHT: u32 = 6;
/// Largest denominator accepted when turning a relation into a closed form.
pub const MAX_DENOMINATOR: u32 = 10_000;
/// Guard bits used when evaluating the target and the basis.
const GUARD_BITS: u32 = 32;

/// All monomials of exactly `weight` over the basis atoms, in a fixed order.
pub fn basis(weight: u32) -> Result<Vec<Monomial>> {
    if weight == 0 {
        return Err(Error::Domain("weight must be positive".into()));
    }
    if weight > MAX_WEIGHT {
        return Err(Error::Unsupported(format!("no basis above weight {MAX_WEIGHT}")));
    }
    Ok(Monomial::all_of_weight(weight, &Atom::basis_atoms(weight)))
}

/// Result of a closed-form search.
#[derive(Clone, Debug, PartialEq)]
pub enum Discovery {
    Found { closed_form: ClosedForm, relation: Vec<Integer> },
    /// A relation exists but does not determine the target with small denominators.
    Rejected { relation: Vec<Integer>, reason: String },
    NoRelationWithinBound,
    PrecisionExhausted,
}

impl Discovery {
    pub fn closed_form(&self) -> Option<&ClosedForm> {
        match self {
            Discovery::Found { closed_form, .. } => Some(closed_form),
            _ => None,
        }
    }
}

impl fmt::Display for Discovery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Discovery::Found { closed_form, .. } => write!(f, "{closed_form}"),
            Discovery::Rejected { reason, .. } => write!(f, "no relation ({reason})"),
            Discovery::NoRelationWithinBound => f.write_str("no relation within the coefficient bound"),
            Discovery::PrecisionExhausted => f.write_str("no relation (precision exhausted)"),
        }
    }
}

fn to_closed_form(relation: &[Integer], basis: &[Monomial]) -> std::result::Result<ClosedForm, String> {
    let a0 = &relation[0];
    if *a0 == 0 {
        return Err("relation does not involve the target".into());
    }
    let mut out = ClosedForm::zero();
    for (a, m) in relation[1..].iter().zip(basis) {
        if *a == 0 {
            continue;
        }
        let c = -Rational::from((a.clone(), a0.clone()));
        if *c.denom() > MAX_DENOMINATOR {
            return Err(format!("denominator {} exceeds {MAX_DENOMINATOR}", c.denom()));
        }
        out.add_term(m.clone(), c);
    }
    Ok(out.normalized())
}

/// Searches for `target` as a rational combination of the weight-`weight` basis.
/// The target must be enclosed to at least `prec` bits.
pub fn discover_value(target: &Ball, weight: u32, prec: Precision) -> Result<Discovery> {
    let monomials = basis(weight)?;
    let wp = prec.guarded(GUARD_BITS);
    let mut values = vec![target.clone()];
    for m in &monomials {
        values.push(m.value(wp)?);
    }
    let problem = RelationProblem::new(values, prec)?;
    Ok(match pslq(&problem)? {
        PslqOutcome::Found(relation) => match to_closed_form(&relation, &monomials) {
            Ok(closed_form) => Discovery::Found { closed_form, relation },
            Err(reason) => Discovery::Rejected { relation, reason },
        },
        PslqOutcome::NoRelationWithinBound { .. } => Discovery::NoRelationWithinBound,
        PslqOutcome::PrecisionExhausted => Discovery::PrecisionExhausted,
    })
}

/// Evaluates the sum and searches for its closed form at its own weight.
pub fn discover_sum(spec: &SumSpec, weight: u32, prec: Precision) -> Result<Discovery> {
    if spec.weight() != weight {
        return Err(Error::Domain(format!("{spec} has weight {}, not {weight}", spec.weight())));
    }
    basis(weight)?;
    let target = series::euler_type_sum(spec, prec.guarded(GUARD_BITS))?;
    discover_value(&target, weight, prec)
}

/// Closed form of the sum, if one is found.
pub fn discover(spec: &SumSpec, weight: u32, prec: Precision) -> Result<Option<ClosedForm>> {
    Ok(discover_sum(spec, weight, prec)?.closed_form().cloned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::parse_cf;

    fn p(bits: u32) -> Precision {
        Precision::new(bits).unwrap()
    }

    fn ball(q: Rational, prec: Precision) -> Ball {
        Ball::from_rational(&q, prec)
    }

    #[test]
    fn rational_relation() {
        let prec = p(128);
        let pr = RelationProblem::new(vec![ball(Rational::from(1), prec), ball(Rational::from((3, 2)), prec)], prec).unwrap();
        assert_eq!(pslq(&pr).unwrap(), PslqOutcome::Found(vec![Integer::from(3), Integer::from(-2)]));
    }

    #[test]
    fn golden_ratio_relation() {
        let prec = p(128);
        let five = ball(Rational::from(5), prec.guarded(32));
        let phi = (five.sqrt().unwrap() + Ball::one(prec.guarded(32))).mul_rational(&Rational::from((1, 2)));
        let pr = RelationProblem::new(vec![Ball::one(prec), phi.clone(), phi.sqr()], prec).unwrap();
        assert_eq!(
            pslq(&pr).unwrap(),
            PslqOutcome::Found(vec![Integer::from(1), Integer::from(1), Integer::from(-1)])
        );
    }

    #[test]
    fn independent_values_hit_the_bound() {
        let prec = p(256);
        let wp = prec.guarded(32);
        let pr = RelationProblem::new(
            vec![Atom::Log2.value(wp).unwrap(), Atom::Zeta(3).value(wp).unwrap(), Atom::Zeta(5).value(wp).unwrap()],
            prec,
        )
        .unwrap()
        .with_max_coeff_bits(12);
        assert!(matches!(pslq(&pr).unwrap(), PslqOutcome::NoRelationWithinBound { .. }));
    }

    #[test]
    fn radius_invariant_enforced() {
        let prec = p(256);
        let rough = Atom::Zeta(3).value(p(64)).unwrap();
        assert!(matches!(
            RelationProblem::new(vec![rough, Ball::one(prec)], prec),
            Err(Error::Accuracy(_))
        ));
    }

    #[test]
    fn discovers_low_weight_sums() {
        let prec = p(256);
        let s11 = SumSpec::half(&[1], 1);
        assert_eq!(discover(&s11, 2, prec).unwrap(), Some(parse_cf("1/2*z2")));
        let li4 = SumSpec::half(&[], 4);
        assert_eq!(discover(&li4, 4, prec).unwrap(), Some(parse_cf("li4")));
        assert!(discover(&s11, 3, prec).is_err());
    }

    #[test]
    fn basis_is_deterministic_and_homogeneous() {
        let b = basis(5).unwrap();
        assert_eq!(b, basis(5).unwrap());
        assert!(b.iter().all(|m| m.weight() == 5));
        assert!(basis(6).unwrap().contains(&Monomial::atom(Atom::Zb51)));
        assert!(basis(7).is_err());
    }
}
