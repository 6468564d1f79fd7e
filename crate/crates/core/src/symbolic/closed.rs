//! Exact closed forms: rational combinations of products of basis constants.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::constants;
use crate::error::{Error, Result};
use crate::numeric::{Ball, Precision};
use crate::series::{self, EvalOptions};

/// A basis constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// `log 2`
    Log2,
    /// `zeta(s)` for `s = 2` or odd `s >= 3`
    Zeta(u32),
    /// `Li_k(1/2)` for `k = 4, 5, 6`
    Li(u32),
    /// `zeta(5bar, 1)`
    Zb51,
    /// `sum H_n^{(2)}/n^6`, irreducible at weight 8
    S26,
}

impl Atom {
    pub fn weight(self) -> u32 {
        match self {
            Atom::Log2 => 1,
            Atom::Zeta(s) => s,
            Atom::Li(k) => k,
            Atom::Zb51 => 6,
            Atom::S26 => 8,
        }
    }

    pub fn name(self) -> String {
        match self {
            Atom::Log2 => "log2".into(),
            Atom::Zeta(s) => format!("z{s}"),
            Atom::Li(k) => format!("li{k}"),
            Atom::Zb51 => "zb5_1".into(),
            Atom::S26 => "s2_6".into(),
        }
    }

    fn pretty(self) -> String {
        match self {
            Atom::Log2 => "log(2)".into(),
            Atom::Zeta(s) => format!("ζ({s})"),
            Atom::Li(k) => format!("Li{k}(1/2)"),
            Atom::Zb51 => "ζ(5̄,1)".into(),
            Atom::S26 => "S2,6".into(),
        }
    }

    /// Certified value.
    pub fn value(self, prec: Precision) -> Result<Ball> {
        match self {
            Atom::Log2 => Ok(constants::log2(prec)),
            Atom::Zeta(s) => constants::zeta(s, prec),
            Atom::Li(k) => constants::polylog_half(k, prec),
            Atom::Zb51 => constants::alt_double_51(prec),
            Atom::S26 => {
                let spec = series::SumSpec::new(&[2], 6, Rational::from(1))?;
                series::evaluate(&spec.to_series(), prec, &EvalOptions::default())
            }
        }
    }

    /// Atoms in canonical order for the given maximum weight.
    pub fn basis_atoms(max_weight: u32) -> Vec<Atom> {
        let mut v = vec![Atom::Log2, Atom::Zeta(2), Atom::Zeta(3), Atom::Zeta(5), Atom::Zeta(7)];
        v.extend([Atom::Li(4), Atom::Li(5), Atom::Li(6), Atom::Zb51]);
        v.retain(|a| a.weight() <= max_weight);
        v
    }
}

impl FromStr for Atom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Atom> {
        let s = s.trim();
        match s {
            "log2" => return Ok(Atom::Log2),
            "zb5_1" => return Ok(Atom::Zb51),
            "s2_6" => return Ok(Atom::S26),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("li") {
            let k: u32 = k.parse().map_err(|_| Error::Parse(format!("bad atom '{s}'")))?;
            if (4..=6).contains(&k) {
                return Ok(Atom::Li(k));
            }
        } else if let Some(z) = s.strip_prefix('z') {
            let z: u32 = z.parse().map_err(|_| Error::Parse(format!("bad atom '{s}'")))?;
            if z == 2 || (z >= 3 && z % 2 == 1) {
                return Ok(Atom::Zeta(z));
            }
        }
        Err(Error::Parse(format!("unknown atom '{s}'")))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Product of atoms with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub BTreeMap<Atom, u32>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn atom(a: Atom) -> Self {
        Monomial::power(a, 1)
    }

    pub fn power(a: Atom, e: u32) -> Self {
        let mut m = BTreeMap::new();
        if e > 0 {
            m.insert(a, e);
        }
        Monomial(m)
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(a, e)| a.weight() * e).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (a, e) in &o.0 {
            *m.entry(*a).or_insert(0) += e;
        }
        Monomial(m)
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn value(&self, prec: Precision) -> Result<Ball> {
        let mut v = Ball::one(prec);
        for (a, e) in &self.0 {
            v = v.mul_ball(&a.value(prec)?.pow_int(i64::from(*e))?);
        }
        Ok(v)
    }

    /// All monomials of exactly `weight` over `atoms`, in lexicographic
    /// order of the exponent vectors (highest first).
    pub fn all_of_weight(weight: u32, atoms: &[Atom]) -> Vec<Monomial> {
        fn rec(w: u32, atoms: &[Atom], cur: &mut Vec<(Atom, u32)>, out: &mut Vec<Monomial>) {
            if atoms.is_empty() {
                if w == 0 {
                    out.push(Monomial(cur.iter().filter(|(_, e)| *e > 0).cloned().collect()));
                }
                return;
            }
            let a = atoms[0];
            let max = w / a.weight();
            for e in (0..=max).rev() {
                cur.push((a, e));
                rec(w - e * a.weight(), &atoms[1..], cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        // heavier atoms first so that pure constants lead the basis
        let mut order: Vec<Atom> = atoms.to_vec();
        order.reverse();
        rec(weight, &order, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(a, e)| if *e == 1 { a.name() } else { format!("{}^{}", a.name(), e) })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Weight of a closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Exact(u32),
    Mixed,
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Exact(w) => write!(f, "{w}"),
            Weight::Mixed => f.write_str("mixed"),
        }
    }
}

/// `sum_i c_i * m_i` with nonzero rational `c_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ClosedForm {
    terms: BTreeMap<Monomial, Rational>,
}

/// `zeta(2k) / zeta(2)^k` as an exact rational.
pub fn even_zeta_ratio(s: u32) -> Rational {
    assert!(s >= 2 && s % 2 == 0);
    let k = s / 2;
    // zeta(2k) = (-1)^{k+1} B_{2k} (2 pi)^{2k} / (2 (2k)!) and pi^2 = 6 zeta(2)
    let b = constants::bernoulli(s as usize)[s as usize].clone();
    let mut r = b * Integer::from(Integer::u_pow_u(2, s)) * Integer::from(Integer::u_pow_u(6, k));
    r /= Rational::from(Integer::factorial(s)) * Rational::from(2);
    if k % 2 == 0 {
        r = -r;
    }
    r
}

impl ClosedForm {
    pub fn zero() -> Self {
        ClosedForm::default()
    }

    pub fn constant(c: impl Into<Rational>) -> Self {
        let mut f = ClosedForm::zero();
        f.add_term(Monomial::unit(), c.into());
        f
    }

    pub fn atom(a: Atom) -> Self {
        let mut f = ClosedForm::zero();
        f.add_term(Monomial::atom(a), Rational::from(1));
        f
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut f = ClosedForm::zero();
        f.add_term(m, c);
        f
    }

    /// `zeta(s)`; even arguments are rewritten as rational multiples of powers of `zeta(2)`.
    pub fn zeta(s: u32) -> Result<Self> {
        if s < 2 {
            return Err(Error::Domain(format!("zeta({s}) is not a basis value")));
        }
        if s % 2 == 1 || s == 2 {
            return Ok(ClosedForm::atom(Atom::Zeta(s)));
        }
        Ok(ClosedForm::monomial(Monomial::power(Atom::Zeta(2), s / 2), even_zeta_ratio(s)))
    }

    /// `log^k 2`
    pub fn log2_pow(k: u32) -> Self {
        ClosedForm::monomial(Monomial::power(Atom::Log2, k), Rational::from(1))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m.clone()).or_default();
        *e += c;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> ClosedForm {
        let mut out = ClosedForm::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), Rational::from(v * c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> ClosedForm {
        let mut out = ClosedForm::constant(1);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn weight(&self) -> Weight {
        let mut w: Option<u32> = None;
        for m in self.terms.keys() {
            let mw = m.weight();
            match w {
                None => w = Some(mw),
                Some(x) if x != mw => return Weight::Mixed,
                _ => {}
            }
        }
        Weight::Exact(w.unwrap_or(0))
    }

    /// Re-applies the canonical rewriting (idempotent: forms are stored normalized).
    pub fn normalized(&self) -> ClosedForm {
        let mut out = ClosedForm::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Ball enclosure; linear in the coefficients.
    pub fn evaluate(&self, prec: Precision) -> Result<Ball> {
        let mut acc = Ball::zero(prec);
        for (m, c) in &self.terms {
            acc = acc + m.value(prec)?.mul_rational(c);
        }
        Ok(acc)
    }

    /// Human-readable form with `zeta(2)^2`, `zeta(2)^3` shown as `zeta(4)`, `zeta(6)`.
    pub fn pretty(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts: Vec<(bool, String)> = Vec::new();
        // highest-weight atoms first, matching the usual display order
        let mut entries: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        entries.sort_by_key(|(m, _)| std::cmp::Reverse(pretty_rank(m)));
        for (m, c) in entries {
            let mut coeff = c.clone();
            let mut factors: Vec<String> = Vec::new();
            for (a, e) in &m.0 {
                let mut e = *e;
                if *a == Atom::Zeta(2) && (e == 2 || e == 3) {
                    let s = 2 * e;
                    coeff /= even_zeta_ratio(s);
                    factors.push(format!("ζ({s})"));
                    e = 0;
                }
                if e == 1 {
                    factors.push(a.pretty());
                } else if e > 1 {
                    factors.push(format!("{}^{}", a.pretty(), e));
                }
            }
            let neg = coeff < 0;
            let abs = Rational::from(coeff.abs_ref());
            let mut s = String::new();
            if factors.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if abs != 1 {
                    s.push_str(&abs.to_string());
                    s.push(' ');
                }
                s.push_str(&factors.join(" "));
            }
            parts.push((neg, s));
        }
        let mut out = String::new();
        for (i, (neg, s)) in parts.iter().enumerate() {
            if i == 0 {
                if *neg {
                    out.push('-');
                }
            } else {
                out.push_str(if *neg { " - " } else { " + " });
            }
            out.push_str(s);
        }
        out
    }
}

fn pretty_rank(m: &Monomial) -> (u32, u32) {
    // polylog atoms first, then zeta products, powers of log 2 last
    let non_log: u32 = m.0.iter().filter(|(a, _)| **a != Atom::Log2).map(|(a, e)| a.weight() * e).sum();
    let special = m.0.keys().any(|a| matches!(a, Atom::Li(_) | Atom::Zb51)) as u32;
    (special, non_log)
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let c = format!("{}/{}", c.numer(), c.denom());
                if m.is_unit() {
                    c
                } else {
                    format!("{c} * {m}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl FromStr for ClosedForm {
    type Err = Error;

    /// Parses `c * atom[^e][*atom...] + ...`; `z4`, `z6`, `z8`, `z10` are
    /// accepted and normalized.
    fn from_str(s: &str) -> Result<ClosedForm> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty closed form".into()));
        }
        if s == "0" {
            return Ok(ClosedForm::zero());
        }
        // split on '+' and on '-' that starts a new term
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut prev_nonspace: Option<char> = None;
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && !cur.trim().is_empty() && !matches!(prev_nonspace, Some('*') | Some('^') | Some('/')) {
                terms.push(std::mem::take(&mut cur));
                if ch == '-' {
                    cur.push('-');
                }
            } else {
                cur.push(ch);
            }
            if !ch.is_whitespace() {
                prev_nonspace = Some(ch);
            }
        }
        terms.push(cur);
        let mut out = ClosedForm::zero();
        for t in terms {
            out = out + parse_term(t.trim())?;
        }
        Ok(out)
    }
}

fn parse_term(t: &str) -> Result<ClosedForm> {
    if t.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let mut coeff = Rational::from(1);
    let mut form = ClosedForm::constant(1);
    for (i, raw) in t.split('*').enumerate() {
        let f = raw.trim();
        let (f, sign) = match f.strip_prefix('-') {
            Some(r) => (r.trim(), -1),
            None => (f, 1),
        };
        if sign < 0 {
            coeff = -coeff;
        }
        if f.is_empty() {
            return Err(Error::Parse(format!("empty factor in '{t}'")));
        }
        if f.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            if i != 0 {
                return Err(Error::Parse(format!("coefficient must come first in '{t}'")));
            }
            let q: Rational = f.parse().map_err(|_| Error::Parse(format!("bad coefficient '{f}'")))?;
            coeff *= q;
            continue;
        }
        let (name, e) = match f.split_once('^') {
            Some((n, e)) => (n.trim(), e.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in '{f}'")))?),
            None => (f, 1),
        };
        let base = parse_atom_form(name)?;
        form = &form * &base.pow(e);
    }
    Ok(form.scale(&coeff))
}

fn parse_atom_form(name: &str) -> Result<ClosedForm> {
    if let Some(z) = name.strip_prefix('z') {
        if let Ok(s) = z.parse::<u32>() {
            if s >= 4 && s % 2 == 0 {
                return ClosedForm::zeta(s);
            }
        }
    }
    Ok(ClosedForm::atom(name.parse()?))
}

impl Add for ClosedForm {
    type Output = ClosedForm;
    fn add(mut self, o: ClosedForm) -> ClosedForm {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Add<&ClosedForm> for &ClosedForm {
    type Output = ClosedForm;
    fn add(self, o: &ClosedForm) -> ClosedForm {
        self.clone() + o.clone()
    }
}

impl Sub for ClosedForm {
    type Output = ClosedForm;
    fn sub(self, o: ClosedForm) -> ClosedForm {
        self + (-o)
    }
}

impl Sub<&ClosedForm> for &ClosedForm {
    type Output = ClosedForm;
    fn sub(self, o: &ClosedForm) -> ClosedForm {
        self.clone() - o.clone()
    }
}

impl Neg for ClosedForm {
    type Output = ClosedForm;
    fn neg(self) -> ClosedForm {
        self.scale(&Rational::from(-1))
    }
}

impl Mul<&ClosedForm> for &ClosedForm {
    type Output = ClosedForm;
    fn mul(self, o: &ClosedForm) -> ClosedForm {
        let mut out = ClosedForm::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), Rational::from(ca * cb));
            }
        }
        out
    }
}

impl Mul for ClosedForm {
    type Output = ClosedForm;
    fn mul(self, o: ClosedForm) -> ClosedForm {
        &self * &o
    }
}

impl Serialize for ClosedForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ClosedForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Builds a closed form from `(coefficient, factors)` pairs, where each factor
/// is `(name, exponent)` and names may include even zeta values.
pub fn cf(terms: &[(Rational, &[(&str, u32)])]) -> ClosedForm {
    let mut out = ClosedForm::zero();
    for (c, factors) in terms {
        let mut t = ClosedForm::constant(c.clone());
        for (name, e) in *factors {
            let base = parse_atom_form(name).expect("known atom");
            t = &t * &base.pow(*e);
        }
        out = out + t;
    }
    out
}

/// Short-hand parser for trusted literals.
pub fn parse_cf(s: &str) -> ClosedForm {
    s.parse().unwrap_or_else(|e| panic!("invalid closed form literal '{s}': {e}"))
}
