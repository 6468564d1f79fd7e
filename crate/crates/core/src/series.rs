//! Certified summation of Euler-type sums, multiple polylogarithms and
//! classical Euler sums.
//!
//! A [`Series`] is `sum_{n>=1} x^n * sum_i c_i * prod_j zeta_{n-shift_j}(idx_j) / n^{r_i}`.
//! Three evaluation paths exist:
//!
//! * `|x| <= 3/4`: direct summation with a geometric tail majorant.
//! * `x = -1`: the alternating part is summed by the Euler transform, whose
//!   remainder is bounded through a Hausdorff moment representation of every
//!   monomial; the non-alternating part produced by expanding `L_n(1)` goes
//!   to the `x = 1` path.
//! * `x = 1`: partial sums with an explicit integral bracket for the tail.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, OnceLock};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::combin::{ones_poly, MhsIndex, MhsPart};
use crate::constants;
use crate::error::{Error, Result};
use crate::numeric::{pow2_rad, Ball, Precision};

/// Default number of terms for sums at `x = 1`.
pub const DEFAULT_TERMS: u64 = 1_000_000;

/// Options for the slowly convergent paths.
#[derive(Clone, Debug)]
pub struct EvalOptions {
    /// Terms summed explicitly for `x = 1` sums.
    pub terms: u64,
    /// Cooperative cancellation flag, polled every few thousand terms.
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            terms: DEFAULT_TERMS,
            cancel: None,
        }
    }
}

impl EvalOptions {
    pub fn with_terms(terms: u64) -> Self {
        EvalOptions {
            terms,
            cancel: None,
        }
    }

    fn check_cancel(&self) -> Result<()> {
        match &self.cancel {
            Some(flag) if flag.load(AtomicOrdering::Relaxed) => {
                Err(Error::Cancelled("summation interrupted".into()))
            }
            _ => Ok(()),
        }
    }
}

/// `zeta_{n-shift}(idx)` as a function of the summation index `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    pub idx: MhsIndex,
    pub shift: u32,
}

impl Factor {
    pub fn new(idx: MhsIndex, shift: u32) -> Self {
        assert!(shift <= 1, "only shifts 0 and 1 are supported");
        Factor { idx, shift }
    }

    /// `H_n^{(q)}`.
    pub fn h(q: u32) -> Self {
        Factor::new(MhsIndex::plain(&[q]), 0)
    }

    /// `zeta_n(q-bar) = -L_n(q)`.
    pub fn neg_l(q: u32) -> Self {
        Factor::new(MhsIndex::bar(q), 0)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift == 0 {
            write!(f, "z_n{}", self.idx)
        } else {
            write!(f, "z_(n-{}){}", self.shift, self.idx)
        }
    }
}

/// `prod factors / n^inv`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mono {
    pub factors: Vec<Factor>,
    pub inv: u32,
}

impl Mono {
    pub fn new(mut factors: Vec<Factor>, inv: u32) -> Self {
        factors.sort();
        Mono { factors, inv }
    }

    /// Sum of the depths of all factors.
    pub fn depth(&self) -> usize {
        self.factors.iter().map(|f| f.idx.depth()).sum()
    }
}

/// A power series in `x` whose coefficients are polynomials in multiple
/// harmonic sums.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Series {
    #[serde(with = "rational_text")]
    pub x: Rational,
    #[serde(with = "terms_serde")]
    pub terms: BTreeMap<Mono, Rational>,
}

pub mod rational_text {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse::<Rational>().map_err(serde::de::Error::custom)
    }
}

mod terms_serde {
    use std::collections::BTreeMap;

    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Mono;

    pub fn serialize<S: Serializer>(t: &BTreeMap<Mono, Rational>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(&Mono, String)> = t.iter().map(|(m, c)| (m, c.to_string())).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Mono, Rational>, D::Error> {
        let v: Vec<(Mono, String)> = Vec::deserialize(d)?;
        v.into_iter()
            .map(|(m, c)| {
                c.parse::<Rational>()
                    .map(|q| (m, q))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

impl Series {
    pub fn new(x: Rational) -> Self {
        Series {
            x,
            terms: BTreeMap::new(),
        }
    }

    /// Adds `coeff * prod factors / n^inv`.
    pub fn add(&mut self, coeff: Rational, factors: Vec<Factor>, inv: u32) {
        self.add_mono(coeff, Mono::new(factors, inv));
    }

    pub fn add_mono(&mut self, coeff: Rational, mono: Mono) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(mono.clone()).or_default();
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&mono);
        }
    }

    /// Adds every term of `other` scaled by `c`; both must share `x`.
    pub fn add_series(&mut self, c: &Rational, other: &Series) {
        assert_eq!(self.x, other.x, "series arguments differ");
        for (m, v) in &other.terms {
            self.add_mono(Rational::from(v * c), m.clone());
        }
    }

    /// Adds `coeff * P(H_n^{(r)}) / n^inv` for a harmonic polynomial `P`.
    pub fn add_harmonic_poly(&mut self, coeff: &Rational, poly: &crate::combin::HarmonicPoly, inv: u32) {
        for (m, c) in &poly.terms {
            let mut factors = Vec::new();
            for (r, e) in m {
                for _ in 0..*e {
                    factors.push(Factor::h(*r));
                }
            }
            self.add(Rational::from(c * coeff), factors, inv);
        }
    }

    /// Polylogarithm `Li_k(x)`.
    pub fn polylog(k: u32, x: Rational) -> Series {
        let mut s = Series::new(x);
        s.add(Rational::from(1), vec![], k);
        s
    }

    /// Multiple polylogarithm `zeta(s_1, ..., s_m; x)`.
    pub fn multiple_polylog(idx: &MhsIndex, x: Rational) -> Series {
        assert!(!idx.is_empty(), "empty index");
        let mut s = Series::new(x);
        let first = idx.parts[0].exp;
        let rest = MhsIndex::new(idx.parts[1..].to_vec());
        let factors = if rest.is_empty() {
            vec![]
        } else {
            vec![Factor::new(rest, 1)]
        };
        s.add(Rational::from(1), factors, first);
        s
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut s = c.to_string();
            for fa in &m.factors {
                s.push('*');
                s.push_str(&fa.to_string());
            }
            if m.inv > 0 {
                s.push_str(&format!("/n^{}", m.inv));
            }
            parts.push(s);
        }
        write!(f, "sum x^n [{}] @ x={}", parts.join(" + "), self.x)
    }
}

/// Index data of `S_{p_1...p_m, p}(x)`, optionally with `L_n(q)` factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SumSpec {
    pub h_indices: Vec<u32>,
    pub outer_exp: u32,
    #[serde(with = "rational_text")]
    pub arg: Rational,
    pub alt_h_indices: Vec<u32>,
}

impl SumSpec {
    pub fn new(h: &[u32], p: u32, x: Rational) -> Result<Self> {
        Self::with_alt(h, &[], p, x)
    }

    pub fn with_alt(h: &[u32], alt: &[u32], p: u32, x: Rational) -> Result<Self> {
        if p == 0 || h.iter().chain(alt).any(|&q| q == 0) {
            return Err(Error::Domain("indices must be positive".into()));
        }
        if x > 1 || x < -1 {
            return Err(Error::Domain(format!("argument {x} outside [-1, 1]")));
        }
        let mut h_indices = h.to_vec();
        h_indices.sort_unstable();
        let mut alt_h_indices = alt.to_vec();
        alt_h_indices.sort_unstable();
        Ok(SumSpec {
            h_indices,
            outer_exp: p,
            arg: x,
            alt_h_indices,
        })
    }

    /// `S_{p_1...p_m, p}(1/2)`.
    pub fn half(h: &[u32], p: u32) -> Self {
        Self::new(h, p, Rational::from((1, 2))).expect("valid indices")
    }

    pub fn weight(&self) -> u32 {
        self.outer_exp + self.h_indices.iter().sum::<u32>() + self.alt_h_indices.iter().sum::<u32>()
    }

    pub fn depth(&self) -> usize {
        self.h_indices.len() + self.alt_h_indices.len()
    }

    /// The sum as a [`Series`].
    pub fn to_series(&self) -> Series {
        let mut factors: Vec<Factor> = self.h_indices.iter().map(|&q| Factor::h(q)).collect();
        factors.extend(self.alt_h_indices.iter().map(|&q| Factor::neg_l(q)));
        let sign = if self.alt_h_indices.len() % 2 == 0 { 1 } else { -1 };
        let mut s = Series::new(self.arg.clone());
        s.add(Rational::from(sign), factors, self.outer_exp);
        s
    }
}

impl fmt::Display for SumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h: Vec<String> = self.h_indices.iter().map(|q| q.to_string()).collect();
        let mut label = h.join(",");
        if !self.alt_h_indices.is_empty() {
            let l: Vec<String> = self.alt_h_indices.iter().map(|q| format!("L{q}")).collect();
            if !label.is_empty() {
                label.push(',');
            }
            label.push_str(&l.join(","));
        }
        write!(f, "S[{}; {}]({})", label, self.outer_exp, self.arg)
    }
}

/// Enclosure of an Euler-type sum.
pub fn euler_type_sum(spec: &SumSpec, prec: Precision) -> Result<Ball> {
    evaluate(&spec.to_series(), prec, &EvalOptions::default())
}

/// Enclosure of `zeta(s_1, ..., s_m; x)` for unbarred indices and `|x| <= 3/4`.
pub fn multiple_polylog(idx: &MhsIndex, x: &Rational, prec: Precision) -> Result<Ball> {
    if idx.is_empty() {
        return Err(Error::Domain("multiple polylogarithm needs a nonempty index".into()));
    }
    if idx.has_bar() {
        return Err(Error::Domain("multiple polylogarithm index must be unbarred".into()));
    }
    if Rational::from(x.abs_ref()) > Rational::from((3, 4)) {
        return Err(Error::Domain(format!("argument {x} outside |x| <= 3/4")));
    }
    evaluate(&Series::multiple_polylog(idx, x.clone()), prec, &EvalOptions::default())
}

/// `S_{p,q} = sum H_n^{(p)} / n^q` at `x = 1` from `terms` explicit terms.
pub fn linear_euler_sum(p: u32, q: u32, prec: Precision, terms: u64) -> Result<Ball> {
    nonlinear_euler_sum(&[p], q, prec, terms)
}

/// `sum prod_j H_n^{(p_j)} / n^q` at `x = 1`.
pub fn nonlinear_euler_sum(h: &[u32], q: u32, prec: Precision, terms: u64) -> Result<Ball> {
    if q < 2 {
        return Err(Error::Divergent(format!("Euler sum with outer exponent {q} diverges")));
    }
    let spec = SumSpec::new(h, q, Rational::from(1))?;
    evaluate(&spec.to_series(), prec, &EvalOptions::with_terms(terms))
}

/// `zeta(s_1, ..., s_k)` at `x = 1` (requires `s_1 >= 2`, inner indices all one).
pub fn mzv(idx: &MhsIndex, prec: Precision, terms: u64) -> Result<Ball> {
    if idx.is_empty() || idx.parts[0].exp < 2 || idx.has_bar() {
        return Err(Error::Domain(format!("MZV {idx} needs s_1 >= 2 and no bars")));
    }
    evaluate(&Series::multiple_polylog(idx, Rational::from(1)), prec, &EvalOptions::with_terms(terms))
}

type SeriesCache = Mutex<HashMap<(Series, u32, u64), Ball>>;

fn series_cache() -> &'static SeriesCache {
    static CACHE: OnceLock<SeriesCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Enclosure of a series; dispatches on the argument.
pub fn evaluate(s: &Series, prec: Precision, opts: &EvalOptions) -> Result<Ball> {
    let key_terms = if s.x == 1 || s.x == -1 { opts.terms } else { 0 };
    let key = (s.clone(), prec.bits(), key_terms);
    if let Some(b) = series_cache().lock().expect("series cache poisoned").get(&key) {
        return Ok(b.clone());
    }
    let b = evaluate_uncached(s, prec, opts)?;
    let mut guard = series_cache().lock().expect("series cache poisoned");
    Ok(guard.entry(key).or_insert(b).clone())
}

fn evaluate_uncached(s: &Series, prec: Precision, opts: &EvalOptions) -> Result<Ball> {
    if s.terms.is_empty() {
        return Ok(Ball::zero(prec));
    }
    let three_quarters = Rational::from((3, 4));
    if Rational::from(s.x.abs_ref()) <= three_quarters {
        return power_path(s, prec, opts);
    }
    if s.x == -1 || s.x == 1 {
        return unit_path(s, prec, opts);
    }
    Err(Error::Domain(format!(
        "argument {} outside |x| <= 3/4 and not +-1",
        s.x
    )))
}

/// Values of all multiple harmonic sums appearing in a series, advanced one
/// index at a time.
struct MhsTracker {
    indices: Vec<MhsIndex>,
    /// suffix[i][j] = zeta_n(idx_i[j..]) at the current n
    suffix: Vec<Vec<Ball>>,
    /// value at n - 1 of the full index (shift 1)
    prev: Vec<Ball>,
    max_exp: u32,
}

impl MhsTracker {
    fn new(indices: Vec<MhsIndex>, wp: Precision) -> Self {
        let suffix = indices
            .iter()
            .map(|idx| {
                let mut v = vec![Ball::zero(wp); idx.depth() + 1];
                v[idx.depth()] = Ball::one(wp);
                v
            })
            .collect::<Vec<_>>();
        let prev = indices
            .iter()
            .map(|idx| if idx.is_empty() { Ball::one(wp) } else { Ball::zero(wp) })
            .collect();
        let max_exp = indices
            .iter()
            .flat_map(|i| i.parts.iter().map(|p| p.exp))
            .max()
            .unwrap_or(1);
        MhsTracker {
            indices,
            suffix,
            prev,
            max_exp,
        }
    }

    /// Moves from `n - 1` to `n`; `inv[e]` must hold `1/n^e`.
    fn advance(&mut self, n: u64, inv: &[Ball]) {
        for (i, idx) in self.indices.iter().enumerate() {
            self.prev[i] = self.suffix[i][0].clone();
            let d = idx.depth();
            for j in 0..d {
                let MhsPart { exp, barred } = idx.parts[j];
                let mut t = self.suffix[i][j + 1].mul_ball(&inv[exp as usize]);
                if barred && n % 2 == 1 {
                    t = -t;
                }
                self.suffix[i][j] = &self.suffix[i][j] + &t;
            }
        }
    }

    fn value(&self, i: usize, shift: u32) -> &Ball {
        if shift == 0 {
            &self.suffix[i][0]
        } else {
            &self.prev[i]
        }
    }
}

/// Powers `1/n^e` for `e = 0..=max`.
fn inverse_powers(n: u64, max: u32, wp: Precision) -> Vec<Ball> {
    let mut v = Vec::with_capacity(max as usize + 1);
    v.push(Ball::one(wp));
    if max == 0 {
        return v;
    }
    let inv = Ball::one(wp).div_u64(n);
    for e in 1..=max {
        let next = v[(e - 1) as usize].mul_ball(&inv);
        v.push(next);
    }
    v
}

/// Summation for `|x| <= 3/4`.
fn power_path(s: &Series, prec: Precision, opts: &EvalOptions) -> Result<Ball> {
    let wp = prec.guarded(40);
    let target = -(f64::from(wp.bits()) + 10.0);
    let xb = Ball::from_rational(&s.x, wp);
    let ax = s.x.clone().abs().to_f64();
    if s.x == 0 {
        return Ok(Ball::zero(prec));
    }

    let mut indices: Vec<MhsIndex> = Vec::new();
    let mut lookup: Vec<Vec<(usize, u32)>> = Vec::new();
    let mut tail_info: Vec<(f64, u32, u32)> = Vec::new(); // (log2|c|, K, r)
    let mut max_inv = 0;
    for (m, c) in &s.terms {
        let mut refs = Vec::new();
        for f in &m.factors {
            let pos = match indices.iter().position(|i| *i == f.idx) {
                Some(p) => p,
                None => {
                    indices.push(f.idx.clone());
                    indices.len() - 1
                }
            };
            refs.push((pos, f.shift));
        }
        lookup.push(refs);
        max_inv = max_inv.max(m.inv);
        tail_info.push((rational_log2(c), m.depth() as u32, m.inv));
    }
    let mut tracker = MhsTracker::new(indices, wp);
    let max_e = tracker.max_exp.max(max_inv);
    let coeffs: Vec<Ball> = s.terms.values().map(|c| Ball::from_rational(c, wp)).collect();

    let mut acc = Ball::zero(wp);
    let mut pow = Ball::one(wp);
    let mut n: u64 = 0;
    loop {
        n += 1;
        if n % 4096 == 0 {
            opts.check_cancel()?;
        }
        pow = pow.mul_ball(&xb);
        let inv = inverse_powers(n, max_e, wp);
        tracker.advance(n, &inv);
        let mut term = Ball::zero(wp);
        for (k, (m, _)) in s.terms.iter().enumerate() {
            let mut t = coeffs[k].mul_ball(&inv[m.inv as usize]);
            for &(pos, shift) in &lookup[k] {
                t = t.mul_ball(tracker.value(pos, shift));
            }
            term = term + t;
        }
        acc = acc + term.mul_ball(&pow);

        // tail after n terms: T_{n+1} / (1 - rho)
        let mut worst = f64::NEG_INFINITY;
        let mut bounds = Vec::with_capacity(tail_info.len());
        let np1 = (n + 1) as f64;
        let h_bound = 1.0 + np1.ln();
        for &(lc, k, r) in &tail_info {
            let rho = ax * (1.0 + 1.0 / (np1 + 1.0)).powi(k as i32);
            if rho >= 1.0 {
                bounds.push(f64::INFINITY);
                continue;
            }
            let lg = lc + f64::from(k) * h_bound.log2() + np1 * ax.log2()
                - f64::from(r) * np1.log2()
                - (1.0 - rho).log2();
            bounds.push(lg);
            worst = worst.max(lg);
        }
        if worst.is_finite() && worst + (bounds.len() as f64).log2() < target {
            // bounds computed in double precision; one extra bit of slack
            let e = (worst + (bounds.len() as f64).log2()).ceil() as i64 + 2;
            acc.add_error(&pow2_rad(e));
            return Ok(acc);
        }
    }
}

fn rational_log2(c: &Rational) -> f64 {
    let num = c.numer().clone().abs();
    let den = c.denom().clone();
    let ln = |i: &Integer| -> f64 {
        let bits = i.significant_bits();
        if bits <= 52 {
            i.to_f64().log2()
        } else {
            let shift = bits - 52;
            Integer::from(i >> shift).to_f64().log2() + f64::from(shift)
        }
    };
    ln(&num) - ln(&den) + 1e-9
}

/// Monomial after expanding all factors at `x = +-1`:
/// `prod_q eta(q)^{l_q} * (-1)^{n sign} * prod_q (H_n^{(q)})^{e_q} * prod_q eps_{q,n}^{j_q} / n^inv`,
/// where `eps_{q,n} = sum_{j>=1} (-1)^{j-1}/(n+j)^q` so that `L_n(q) = eta(q) - (-1)^n eps_{q,n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct EMono {
    eta: BTreeMap<u32, u32>,
    sign: bool,
    h: BTreeMap<u32, u32>,
    eps: BTreeMap<u32, u32>,
    inv: u32,
}

fn merge(a: &BTreeMap<u32, u32>, b: &BTreeMap<u32, u32>) -> BTreeMap<u32, u32> {
    let mut out = a.clone();
    for (q, e) in b {
        *out.entry(*q).or_insert(0) += e;
    }
    out
}

impl EMono {
    fn unit() -> Self {
        EMono {
            eta: BTreeMap::new(),
            sign: false,
            h: BTreeMap::new(),
            eps: BTreeMap::new(),
            inv: 0,
        }
    }

    fn mul(&self, o: &EMono) -> EMono {
        EMono {
            eta: merge(&self.eta, &o.eta),
            sign: self.sign ^ o.sign,
            h: merge(&self.h, &o.h),
            eps: merge(&self.eps, &o.eps),
            inv: self.inv + o.inv,
        }
    }

    /// Decay exponent: the monomial is `O(n^{-weight} log^k n)`.
    fn decay(&self) -> u32 {
        self.inv + self.eps.iter().map(|(q, e)| q * e).sum::<u32>()
    }
}

#[derive(Clone, Debug, Default)]
struct EPoly {
    terms: BTreeMap<EMono, Rational>,
}

impl EPoly {
    fn constant(c: Rational) -> Self {
        let mut p = EPoly::default();
        p.add(EMono::unit(), c);
        p
    }

    fn add(&mut self, m: EMono, c: Rational) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m.clone()).or_default();
        *e += c;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    fn mul(&self, o: &EPoly) -> EPoly {
        let mut out = EPoly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add(ma.mul(mb), Rational::from(ca * cb));
            }
        }
        out
    }
}

fn emono_h(q: u32) -> EMono {
    let mut m = EMono::unit();
    m.h.insert(q, 1);
    m
}

fn emono_inv(r: u32) -> EMono {
    let mut m = EMono::unit();
    m.inv = r;
    m
}

/// Expansion of one factor in terms of `H_n^{(q)}`, `eps_n`, `log 2` and signs.
fn expand_factor(f: &Factor) -> Result<EPoly> {
    let idx = &f.idx;
    if idx.is_empty() {
        return Ok(EPoly::constant(Rational::from(1)));
    }
    if idx.depth() == 1 && idx.parts[0].barred {
        let q = idx.parts[0].exp;
        // zeta_n(qbar) = -L_n(q) = -eta(q) + (-1)^n eps_{q,n}
        let mut p = EPoly::default();
        let mut c = EMono::unit();
        c.eta.insert(q, 1);
        p.add(c, Rational::from(-1));
        let mut e = EMono::unit();
        e.sign = true;
        e.eps.insert(q, 1);
        p.add(e, Rational::from(1));
        if f.shift == 1 {
            // zeta_{n-1}(qbar) = zeta_n(qbar) - (-1)^n / n^q
            p.add(
                EMono {
                    sign: true,
                    inv: q,
                    ..EMono::unit()
                },
                Rational::from(-1),
            );
        }
        return Ok(p);
    }
    if idx.has_bar() {
        return Err(Error::Unsupported(format!("alternating index {idx} at x = +-1")));
    }
    if idx.depth() == 1 {
        let q = idx.parts[0].exp;
        let mut p = EPoly::default();
        p.add(emono_h(q), Rational::from(1));
        if f.shift == 1 {
            p.add(emono_inv(q), Rational::from(-1));
        }
        return Ok(p);
    }
    if !idx.is_all_ones() {
        return Err(Error::Unsupported(format!(
            "nested index {idx} at x = +-1 (only {{1}}_k is reducible to harmonic numbers)"
        )));
    }
    // zeta_{n-s}({1}_k) as a polynomial in power sums p_r = H_n^{(r)} - s/n^r
    let poly = ones_poly(idx.depth() as u32);
    let mut out = EPoly::default();
    for (m, c) in &poly.terms {
        let mut t = EPoly::constant(c.clone());
        for (r, e) in m {
            let mut pr = EPoly::default();
            pr.add(emono_h(*r), Rational::from(1));
            if f.shift == 1 {
                pr.add(emono_inv(*r), Rational::from(-1));
            }
            for _ in 0..*e {
                t = t.mul(&pr);
            }
        }
        for (mm, cc) in t.terms {
            out.add(mm, cc);
        }
    }
    Ok(out)
}

fn expand_series(s: &Series) -> Result<EPoly> {
    let mut total = EPoly::default();
    for (m, c) in &s.terms {
        let mut p = EPoly::constant(c.clone());
        for f in &m.factors {
            p = p.mul(&expand_factor(f)?);
        }
        p = p.mul(&{
            let mut q = EPoly::default();
            q.add(emono_inv(m.inv), Rational::from(1));
            q
        });
        for (mm, cc) in p.terms {
            total.add(mm, cc);
        }
    }
    Ok(total)
}

/// Upper bound for the total variation of the moment measure of a monomial,
/// or `None` if the monomial is outside the supported class.
fn moment_variation(m: &EMono) -> Option<Rational> {
    if m.inv == 0 {
        return None;
    }
    let h1 = m.h.get(&1).copied().unwrap_or(0);
    if h1 > m.inv + 1 {
        return None;
    }
    // H/n has mass 1; H^2/n = 2 Ces(H_k/k) - Ces(1/k^2) has variation <= 3;
    // H^{(q)} = zeta(q) - tail has variation <= 2 zeta(q) - 1 <= 23/10
    let mut v = if h1 == m.inv + 1 {
        Rational::from(3)
    } else {
        Rational::from(1)
    };
    for (q, e) in &m.h {
        if *q >= 2 {
            for _ in 0..*e {
                v *= Rational::from((23, 10));
            }
        }
    }
    Some(v)
}

/// Sequence `a_n` of a group of expanded monomials (without the `(-1)^n`).
struct MonoEvaluator {
    monos: Vec<(EMono, Ball)>,
    qs: Vec<u32>,
    eps_qs: Vec<u32>,
    etas: Vec<Ball>,
    max_inv: u32,
}

fn eta(q: u32, wp: Precision) -> Result<Ball> {
    Ok(-constants::alt_zeta(q, wp)?)
}

impl MonoEvaluator {
    fn new(monos: &[(EMono, Rational)], wp: Precision) -> Result<Self> {
        let mut qs: Vec<u32> = monos.iter().flat_map(|(m, _)| m.h.keys().copied()).collect();
        qs.sort_unstable();
        qs.dedup();
        let mut eps_qs: Vec<u32> = monos.iter().flat_map(|(m, _)| m.eps.keys().copied()).collect();
        eps_qs.sort_unstable();
        eps_qs.dedup();
        let max_inv = monos
            .iter()
            .map(|(m, _)| m.inv)
            .chain(qs.iter().copied())
            .chain(eps_qs.iter().copied())
            .max()
            .unwrap_or(0);
        let etas = eps_qs.iter().map(|q| eta(*q, wp)).collect::<Result<Vec<_>>>()?;
        let monos = monos
            .iter()
            .map(|(m, c)| {
                let mut coef = Ball::from_rational(c, wp);
                for (q, e) in &m.eta {
                    let v = eta(*q, wp)?;
                    for _ in 0..*e {
                        coef = coef.mul_ball(&v);
                    }
                }
                Ok((m.clone(), coef))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MonoEvaluator {
            monos,
            qs,
            eps_qs,
            etas,
            max_inv,
        })
    }
}

/// State of the harmonic numbers along the summation.
struct HarmonicState {
    h: Vec<Ball>,
    l: Vec<Ball>,
}

impl HarmonicState {
    fn new(ev: &MonoEvaluator, wp: Precision) -> Self {
        HarmonicState {
            h: vec![Ball::zero(wp); ev.qs.len()],
            l: vec![Ball::zero(wp); ev.eps_qs.len()],
        }
    }

    /// Advances to `n` and returns `a_n`.
    fn step(&mut self, ev: &MonoEvaluator, n: u64, wp: Precision) -> Ball {
        let inv = inverse_powers(n, ev.max_inv, wp);
        for (i, q) in ev.qs.iter().enumerate() {
            self.h[i] = &self.h[i] + &inv[*q as usize];
        }
        let mut eps = Vec::with_capacity(ev.eps_qs.len());
        for (i, q) in ev.eps_qs.iter().enumerate() {
            self.l[i] = if n % 2 == 1 {
                &self.l[i] + &inv[*q as usize]
            } else {
                &self.l[i] - &inv[*q as usize]
            };
            let d = &ev.etas[i] - &self.l[i];
            eps.push(if n % 2 == 0 { d } else { -d });
        }
        let mut a = Ball::zero(wp);
        for (m, c) in &ev.monos {
            let mut t = c.mul_ball(&inv[m.inv as usize]);
            for (q, e) in &m.h {
                let pos = ev.qs.iter().position(|x| x == q).expect("tracked order");
                for _ in 0..*e {
                    t = t.mul_ball(&self.h[pos]);
                }
            }
            for (q, e) in &m.eps {
                let pos = ev.eps_qs.iter().position(|x| x == q).expect("tracked order");
                for _ in 0..*e {
                    t = t.mul_ball(&eps[pos]);
                }
            }
            a = a + t;
        }
        a
    }
}

/// Dyadic weights of the truncated Euler transform:
/// `sum_{j<K} (-1)^j b_j W_j / 2^K` with `W_j = sum_{k=j}^{K-1} C(k,j) 2^{K-1-k}`.
fn euler_weights(k: u32) -> Arc<Vec<Integer>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<Integer>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(w) = cache.lock().expect("weight cache poisoned").get(&k) {
        return w.clone();
    }
    // row holds C(kk, j) for the current kk
    let mut w = vec![Integer::new(); k as usize];
    let mut row: Vec<Integer> = vec![Integer::from(1)];
    for kk in 0..k {
        let scale = Integer::from(1) << (k - 1 - kk);
        for (j, c) in row.iter().enumerate() {
            w[j] += Integer::from(c * &scale);
        }
        let mut next = vec![Integer::from(1); row.len() + 1];
        for j in 1..row.len() {
            next[j] = Integer::from(&row[j - 1] + &row[j]);
        }
        row = next;
    }
    let w = Arc::new(w);
    cache.lock().expect("weight cache poisoned").insert(k, w.clone());
    w
}

/// `sum_{n>=1} (-1)^n a_n` for monomials with a moment representation.
fn euler_transform(monos: &[(EMono, Rational)], prec: Precision, opts: &EvalOptions) -> Result<Ball> {
    let mut variation = Rational::new();
    for (m, c) in monos {
        let v = moment_variation(m).ok_or_else(|| {
            Error::Unsupported(format!(
                "alternating term with H-power {} over n^{} has no certified transform",
                m.h.get(&1).copied().unwrap_or(0),
                m.inv
            ))
        })?;
        variation += v * Rational::from(c.abs_ref());
    }
    let v_bits = rational_log2(&variation).max(0.0).ceil() as u32;
    let k = prec.bits() + 16 + v_bits;
    let wp = Precision::new(prec.bits() + 32 + 32 - (k.leading_zeros()))?;
    let ev = MonoEvaluator::new(monos, wp)?;
    let mut st = HarmonicState::new(&ev, wp);
    let weights = euler_weights(k);
    let mut acc = Ball::zero(wp);
    for j in 0..k as u64 {
        if j % 1024 == 0 {
            opts.check_cancel()?;
        }
        let b = st.step(&ev, j + 1, wp);
        let t = b.mul_integer(&weights[j as usize]);
        acc = if j % 2 == 0 { acc + t } else { acc - t };
    }
    let mut res = -acc.mul_pow2(-(k as i32));
    // remainder <= V / 2^K
    let v = Float::with_val(64, variation.to_f64() * (1.0 + 1e-9));
    let mut r = pow2_rad(-(i64::from(k)));
    r *= &v;
    res.add_error(&r);
    Ok(res)
}

/// `sum_{n>=1} a_n` for positive-exponent monomials at `x = 1`.
fn slow_path(monos: &[(EMono, Rational)], prec: Precision, opts: &EvalOptions) -> Result<Ball> {
    let nterms = opts.terms.max(1000);
    for (m, _) in monos {
        if m.decay() < 2 {
            return Err(Error::Divergent(format!(
                "sum at x = 1 with total exponent {} diverges",
                m.decay()
            )));
        }
    }
    // the tail radius dominates, so a moderate working precision suffices
    let wp = Precision::new(prec.bits().min(160))?;
    let ev = MonoEvaluator::new(monos, wp)?;
    let mut st = HarmonicState::new(&ev, wp);
    let mut acc = Ball::zero(wp);
    for n in 1..=nterms {
        if n % 8192 == 0 {
            opts.check_cancel()?;
        }
        acc = acc + st.step(&ev, n, wp);
    }
    let tail = slow_tail(&ev, &st, nterms, wp)?;
    let lo = Float::with_val(wp.bits(), &acc.lower() + &tail.0);
    let hi = Float::with_val(wp.bits(), &acc.upper() + &tail.1);
    Ok(Ball::from_interval(&lo, &hi, wp).with_prec(prec))
}

/// Lower and upper bounds for `sum_{n>N} a_n`.
fn slow_tail(ev: &MonoEvaluator, st: &HarmonicState, big_n: u64, wp: Precision) -> Result<(Float, Float)> {
    let nb = Ball::from_i64(big_n as i64, wp);
    let inv_n = Ball::one(wp).div_u64(big_n);
    let pos = |q: u32| ev.qs.iter().position(|x| *x == q);
    let mut lo_total = Float::with_val(wp.bits(), 0);
    let mut hi_total = Float::with_val(wp.bits(), 0);
    for (m, c) in &ev.monos {
        let k = m.h.get(&1).copied().unwrap_or(0);
        let s = m.decay();
        // H_n in [A_lo + u, A_hi + u], u = ln(n/N)
        let (a_lo, a_hi) = match pos(1) {
            Some(p) => {
                let hn = &st.h[p];
                (Ball::from_parts(hn.lower(), &Float::new(30)) - &inv_n, Ball::from_parts(hn.upper(), &Float::new(30)))
            }
            None => (Ball::one(wp), Ball::one(wp)),
        };
        if k > 0 {
            let thr = Rational::from((k, s));
            let a = a_lo.lower().to_rational().expect("finite");
            if a <= thr {
                return Err(Error::Unsupported(
                    "too few terms for the x = 1 tail bracket".into(),
                ));
            }
        }
        let integral = |a: &Ball| -> Ball {
            // N^{1-s} sum_j C(k,j) A^{k-j} j! / (s-1)^{j+1}
            let mut sum = Ball::zero(wp);
            for j in 0..=k {
                let c = Rational::from((
                    crate::combin::binomial(k, j) * crate::combin::factorial(j),
                    Integer::from(s - 1).pow(j + 1),
                ));
                let t = a.pow_int(i64::from(k - j)).expect("nonnegative").mul_rational(&c);
                sum = sum + t;
            }
            sum.mul_ball(&nb.pow_int(1 - i64::from(s)).expect("N > 0"))
        };
        let upper_core = integral(&a_hi);
        let first = a_lo
            .pow_int(i64::from(k))
            .expect("nonnegative")
            .mul_ball(&nb.pow_int(-i64::from(s)).expect("N > 0"));
        let lower_core = integral(&a_lo) - first;
        // bounded factors: H^{(q)} for q >= 2 and (n^q eps_{q,n})^j
        let mut f_lo = Ball::one(wp);
        let mut f_hi = Ball::one(wp);
        for (q, e) in &m.h {
            if *q == 1 {
                continue;
            }
            let hq = &st.h[pos(*q).expect("tracked order")];
            let extra = Ball::one(wp)
                .div_u64(u64::from(q - 1))
                .mul_ball(&nb.pow_int(1 - i64::from(*q)).expect("N > 0"));
            let lo_b = Ball::from_parts(hq.lower(), &Float::new(30));
            let hi_b = Ball::from_parts(hq.upper(), &Float::new(30)) + extra;
            for _ in 0..*e {
                f_lo = f_lo.mul_ball(&lo_b);
                f_hi = f_hi.mul_ball(&hi_b);
            }
        }
        // eps_{q,n} in [1/(2(n+1)^q), 1/(2n^q)]
        let ratio = Ball::from_rational(&Rational::from((big_n, big_n + 1)), wp);
        for (q, e) in &m.eps {
            for _ in 0..(q * e) {
                f_lo = f_lo.mul_ball(&ratio);
            }
            f_lo = f_lo.mul_pow2(-(*e as i32));
            f_hi = f_hi.mul_pow2(-(*e as i32));
        }
        let lo = Float::with_val(wp.bits(), lower_core.lower() * f_lo.lower());
        let hi = Float::with_val(wp.bits(), upper_core.upper() * f_hi.upper());
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        // multiply the interval [lo, hi] by the coefficient ball
        let cands = [
            Float::with_val(wp.bits(), c.lower() * &lo),
            Float::with_val(wp.bits(), c.lower() * &hi),
            Float::with_val(wp.bits(), c.upper() * &lo),
            Float::with_val(wp.bits(), c.upper() * &hi),
        ];
        let mut t_lo = cands[0].clone();
        let mut t_hi = cands[0].clone();
        for v in &cands[1..] {
            if *v < t_lo {
                t_lo = v.clone();
            }
            if *v > t_hi {
                t_hi = v.clone();
            }
        }
        // widen by one unit of the working precision to cover rounding of the products
        let slack = Float::with_val(wp.bits(), (t_hi.clone().abs() + t_lo.clone().abs()) >> (wp.bits() as i32 - 4));
        lo_total += t_lo - &slack;
        hi_total += t_hi + &slack;
    }
    let slack = Float::with_val(wp.bits(), (hi_total.clone().abs() + lo_total.clone().abs()) >> (wp.bits() as i32 - 4));
    Ok((lo_total - &slack, hi_total + &slack))
}

/// `x = +-1`: split into alternating and non-alternating parts.
fn unit_path(s: &Series, prec: Precision, opts: &EvalOptions) -> Result<Ball> {
    let expanded = expand_series(s)?;
    let x_neg = s.x == -1;
    let mut alternating: Vec<(EMono, Rational)> = Vec::new();
    let mut plain: Vec<(EMono, Rational)> = Vec::new();
    for (m, c) in expanded.terms {
        let alt = x_neg ^ m.sign;
        let mut mm = m;
        mm.sign = false;
        if alt {
            alternating.push((mm, c));
        } else {
            plain.push((mm, c));
        }
    }
    let mut total = Ball::zero(prec);
    if !alternating.is_empty() {
        total = total + euler_transform(&alternating, prec, opts)?;
    }
    if !plain.is_empty() {
        total = total + slow_path(&plain, prec, opts)?;
    }
    Ok(total)
}

/// Enclosure of a closed polynomial term `log2^l` used by callers that build
/// sums by hand.
pub fn log2_power(l: u32, prec: Precision) -> Ball {
    let l2 = constants::log2(prec);
    l2.pow_int(i64::from(l)).expect("nonnegative power")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bits: u32) -> Precision {
        Precision::new(bits).unwrap()
    }

    #[test]
    fn s11_half_is_half_zeta2() {
        let b = euler_type_sum(&SumSpec::half(&[1], 1), p(256)).unwrap();
        let z2 = constants::zeta(2, p(256)).unwrap().mul_pow2(-1);
        assert!(b.intersects(&z2));
        assert!(b.mid_distance(&z2) < 1e-60);
    }

    #[test]
    fn empty_depth_is_polylog() {
        let b = euler_type_sum(&SumSpec::half(&[], 4), p(128)).unwrap();
        let l = constants::polylog(4, &Rational::from((1, 2)), p(128)).unwrap();
        assert!(b.intersects(&l));
    }

    #[test]
    fn alternating_s14() {
        let spec = SumSpec::new(&[1], 4, Rational::from(-1)).unwrap();
        let b = euler_type_sum(&spec, p(256)).unwrap();
        // -(59/32 zeta(5) - 1/2 zeta(2) zeta(3))
        let z5 = constants::zeta(5, p(256)).unwrap();
        let z2 = constants::zeta(2, p(256)).unwrap();
        let z3 = constants::zeta(3, p(256)).unwrap();
        let rhs = -(z5.mul_rational(&Rational::from((59, 32))) - z2.mul_ball(&z3).mul_pow2(-1));
        assert!(b.intersects(&rhs));
        assert!(b.mid_distance(&rhs) < 1e-60);
    }

    #[test]
    fn alternating_log2_series() {
        // sum (-1)^n / n = -log 2
        let mut s = Series::new(Rational::from(-1));
        s.add(Rational::from(1), vec![], 1);
        let b = evaluate(&s, p(128), &EvalOptions::default()).unwrap();
        assert!(b.intersects(&(-constants::log2(p(128)))));
        assert!(b.rad_f64() < 1e-35);
    }

    #[test]
    fn slow_path_s12() {
        let b = linear_euler_sum(1, 2, p(128), 20_000).unwrap();
        let z3 = constants::zeta(3, p(128)).unwrap().mul_i64(2);
        assert!(b.intersects(&z3));
        assert!(b.rad_f64() < 1e-5);
        assert!(linear_euler_sum(1, 1, p(128), 1000).is_err());
    }

    #[test]
    fn multiple_polylog_depth_one() {
        let a = multiple_polylog(&MhsIndex::plain(&[2]), &Rational::from((1, 2)), p(128)).unwrap();
        let b = constants::polylog(2, &Rational::from((1, 2)), p(128)).unwrap();
        assert!(a.intersects(&b));
    }

    #[test]
    fn alternating_order_two_factor() {
        // sum (-1)^{n-1} L_n(2)/n and sum L_n(2)/n^2
        let mut a = Series::new(Rational::from(-1));
        a.add(Rational::from(1), vec![Factor::neg_l(2)], 1);
        let b = evaluate(&a, p(128), &EvalOptions::default()).unwrap();
        assert!((b.mid_f64() - 0.813_161_056_991_487_96).abs() < 1e-15);
        let mut c = Series::new(Rational::from(1));
        c.add(Rational::from(-1), vec![Factor::neg_l(2)], 2);
        let d = evaluate(&c, p(128), &EvalOptions::with_terms(20000)).unwrap();
        assert!((d.mid_f64() - 1.515_558_709_536_342_8).abs() < 1e-8);
        assert!(d.rad_f64() < 1e-6);
    }

    #[test]
    fn euler_weights_small() {
        // K = 2: W_0 = C(0,0)*2 + C(1,0) = 3, W_1 = C(1,1) = 1
        let w = euler_weights(2);
        assert_eq!(w[0], 3);
        assert_eq!(w[1], 1);
    }
}
