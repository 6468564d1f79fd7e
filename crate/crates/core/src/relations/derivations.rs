//! Linear systems that derive the weight-5 closed forms at `x = 1/2` from
//! relations between the sums.

use rug::Rational;

use crate::error::{Error, Result};
use crate::series::SumSpec;
use crate::symbolic::{lookup, parse_cf, ClosedForm, Expr};

use super::solve::LinearSystem;

/// A system together with the registry entries its solution should reproduce.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub name: &'static str,
    pub system: LinearSystem,
    /// `(unknown, registry id)` pairs.
    pub targets: Vec<(String, String)>,
    /// Numeric representation of each unknown, in the order of `system.unknowns`.
    pub values: Vec<Expr>,
}

fn cf(id: &str) -> Result<ClosedForm> {
    lookup(id)
        .and_then(|i| i.closed_form())
        .ok_or_else(|| Error::NotFound(format!("closed form of registry entry {id}")))
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn z(n: i64) -> Rational {
    Rational::from(n)
}

fn sum(h: &[u32], p: u32) -> (String, Expr) {
    let spec = SumSpec::half(h, p);
    (spec.to_string(), Expr::sum(&spec))
}

fn mpl(idx: &[u32]) -> (String, Expr) {
    let label: Vec<String> = idx.iter().map(u32::to_string).collect();
    (format!("zeta({};1/2)", label.join(",")), Expr::mpl(idx, q(1, 2)))
}

fn system(unknowns: &[(String, Expr)]) -> (LinearSystem, Vec<Expr>) {
    let names: Vec<&str> = unknowns.iter().map(|(n, _)| n.as_str()).collect();
    (LinearSystem::new(&names), unknowns.iter().map(|(_, e)| e.clone()).collect())
}

/// `S_{2,3}`, `S_{3,2}`, `S_{4,1}` at `1/2` from the three relations between them,
/// with `S_{1,4}(1/2)` substituted.
pub fn linear_weight_five() -> Result<Derivation> {
    let (s23, s32, s41) = (sum(&[2], 3), sum(&[3], 2), sum(&[4], 1));
    let (mut sys, values) = system(&[s23.clone(), s32.clone(), s41.clone()]);
    let (a, b, c) = (s23.0.as_str(), s32.0.as_str(), s41.0.as_str());
    sys.equation("5.22", &[(a, z(1)), (b, z(1))], cf("5.22")?)?;
    sys.equation("5.23", &[(a, z(3)), (b, z(1))], cf("5.23")?)?;
    sys.equation("5.24", &[(a, z(1)), (b, z(1)), (c, z(1))], cf("5.24")? - cf("5.1")?.scale(&z(2)))?;
    Ok(Derivation {
        name: "linear sums of weight 5",
        system: sys,
        targets: vec![(s23.0, "5.2".into()), (s32.0, "5.3".into()), (s41.0, "5.4".into())],
        values,
    })
}

/// `S_{1^2,3}`, `S_{1^3,2}`, `S_{12,2}` at `1/2` together with the two
/// multiple polylogarithms `zeta(3,1,1;1/2)` and `zeta(2,1,1,1;1/2)`.
pub fn quadratic_weight_five() -> Result<Derivation> {
    let z311 = mpl(&[3, 1, 1]);
    let z2111 = mpl(&[2, 1, 1, 1]);
    let s113 = sum(&[1, 1], 3);
    let s1112 = sum(&[1, 1, 1], 2);
    let s122 = sum(&[1, 2], 2);
    let (mut sys, values) = system(&[z311.clone(), z2111.clone(), s113.clone(), s1112.clone(), s122.clone()]);
    let li5 = parse_cf("li5");
    let (s14, s23, s32) = (cf("5.1")?, cf("5.2")?, cf("5.3")?);
    let (za, zb) = (z311.0.as_str(), z2111.0.as_str());
    let (u, v, w) = (s113.0.as_str(), s1112.0.as_str(), s122.0.as_str());
    sys.equation("5.26", &[(za, z(1))], cf("5.26")?)?;
    sys.equation("5.27", &[(zb, z(1))], cf("5.27")?)?;
    // zeta(3,1,1;1/2) = S_{1^2,3}/2 - S_{2,3}/2 - S_{1,4} + Li_5(1/2)
    sys.equation("5.28", &[(za, z(1)), (u, q(-1, 2))], -s23.scale(&q(1, 2)) - s14.clone() + li5.clone())?;
    // zeta(2,1,1,1;1/2) = (S_{1^3,2} - 3 S_{12,2} + 2 S_{3,2})/6 - (S_{1^2,3} - S_{2,3})/2 + S_{1,4} - Li_5(1/2)
    sys.equation(
        "5.29",
        &[(zb, z(1)), (v, q(-1, 6)), (w, q(1, 2)), (u, q(1, 2))],
        s32.scale(&q(1, 3)) + s23.scale(&q(1, 2)) + s14 - li5,
    )?;
    sys.equation("5.30", &[(v, z(1)), (w, z(3))], cf("5.30")?)?;
    Ok(Derivation {
        name: "quadratic sums of weight 5",
        system: sys,
        targets: vec![(s113.0, "5.5".into()), (s1112.0, "5.6".into()), (s122.0, "5.7".into())],
        values,
    })
}

/// `S_{13,1}`, `S_{1^4,1}`, `S_{1^22,1}`, `S_{2^2,1}` at `1/2` from the sums of
/// Stirling and Bell type, with `S_{4,1}(1/2)` substituted.
pub fn quartic_weight_five() -> Result<Derivation> {
    let s13 = sum(&[1, 3], 1);
    let s1111 = sum(&[1, 1, 1, 1], 1);
    let s112 = sum(&[1, 1, 2], 1);
    let s22 = sum(&[2, 2], 1);
    let (mut sys, values) = system(&[s13.clone(), s1111.clone(), s112.clone(), s22.clone()]);
    let s41 = cf("5.4")?;
    let (a, b, c, d) = (s13.0.as_str(), s1111.0.as_str(), s112.0.as_str(), s22.0.as_str());
    sys.equation(
        "5.32",
        &[(b, z(1)), (c, z(-6)), (a, z(8)), (d, z(3))],
        cf("5.32")? + s41.scale(&z(6)),
    )?;
    sys.equation("5.33", &[(b, z(1)), (c, z(6)), (a, z(8)), (d, z(3))], cf("5.33")? - s41.scale(&z(6)))?;
    sys.equation("5.34", &[(b, z(1)), (c, z(3)), (a, z(2))], cf("5.34")?)?;
    sys.equation("5.35", &[(a, z(1))], cf("5.35")?)?;
    Ok(Derivation {
        name: "quartic sums of weight 5",
        system: sys,
        targets: vec![
            (s13.0, "5.8".into()),
            (s112.0, "5.9".into()),
            (s1111.0, "5.10".into()),
            (s22.0, "5.11".into()),
        ],
        values,
    })
}

/// All derivation systems.
pub fn derivations() -> Result<Vec<Derivation>> {
    Ok(vec![linear_weight_five()?, quadratic_weight_five()?, quartic_weight_five()?])
}
