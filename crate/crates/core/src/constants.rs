//! Certified enclosures of the basis constants.
//!
//! Every function memoizes per `(kind, precision)`; repeated calls return
//! bit-identical balls.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::{Float, Integer, Rational};

use crate::combin::{binomial, MhsIndex};
use crate::error::{Error, Result};
use crate::numeric::{pow2_rad, Ball, Precision};
use crate::series::{self, EvalOptions, Factor, Series};

/// A constant of the basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConstantKind {
    Log2,
    Zeta(u32),
    AltZeta(u32),
    Polylog(u32, Rational),
    AltDouble51,
}

/// Request for a constant at a given precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstantRequest {
    pub kind: ConstantKind,
    pub prec: Precision,
}

impl ConstantRequest {
    pub fn evaluate(&self) -> Result<Ball> {
        match &self.kind {
            ConstantKind::Log2 => Ok(log2(self.prec)),
            ConstantKind::Zeta(s) => zeta(*s, self.prec),
            ConstantKind::AltZeta(s) => alt_zeta(*s, self.prec),
            ConstantKind::Polylog(k, x) => polylog(*k, x, self.prec),
            ConstantKind::AltDouble51 => alt_double_51(self.prec),
        }
    }
}

type Cache = Mutex<HashMap<(ConstantKind, u32), Ball>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached<F: FnOnce() -> Result<Ball>>(kind: ConstantKind, prec: Precision, f: F) -> Result<Ball> {
    let key = (kind, prec.bits());
    if let Some(b) = cache().lock().expect("constant cache poisoned").get(&key) {
        return Ok(b.clone());
    }
    let b = f()?;
    let mut guard = cache().lock().expect("constant cache poisoned");
    // keep the first stored value so that hits are bit-identical
    Ok(guard.entry(key).or_insert(b).clone())
}

/// `log 2 = sum 1/(n 2^n)`, tail bounded by `1/((N+1) 2^N)`.
pub fn log2(prec: Precision) -> Ball {
    cached(ConstantKind::Log2, prec, || {
        let wp = prec.guarded(16);
        let mut acc = Ball::zero(wp);
        let mut pow = Ball::one(wp);
        let mut n: u64 = 1;
        loop {
            pow = pow.mul_pow2(-1);
            acc = acc + pow.div_u64(n);
            if n as u32 > wp.bits() + 8 {
                break;
            }
            n += 1;
        }
        // tail <= 2^{-N} / (N+1)
        acc.add_error(&pow2_rad(-(n as i64)));
        Ok(acc)
    })
    .expect("log2 cannot fail")
}

/// Bernoulli numbers `B_0, ..., B_m` (with `B_1 = -1/2`).
pub fn bernoulli(m: usize) -> Vec<Rational> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(vec![Rational::from(1)]));
    let mut b = table.lock().expect("bernoulli table poisoned");
    while b.len() <= m {
        let k = b.len() as u32;
        // sum_{j=0}^{k} C(k+1, j) B_j = 0
        let mut acc = Rational::new();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from(bj * binomial(k + 1, j as u32));
        }
        let next = -acc / Integer::from(k + 1);
        b.push(next);
    }
    b[..=m].to_vec()
}

/// `zeta(s)` for integer `s >= 2` by Euler-Maclaurin summation.
pub fn zeta(s: u32, prec: Precision) -> Result<Ball> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta({s}) diverges; need s >= 2")));
    }
    cached(ConstantKind::Zeta(s), prec, || Ok(zeta_em(s, prec)))
}

fn zeta_em(s: u32, prec: Precision) -> Ball {
    let wp = prec.guarded(32);
    let target = -(i64::from(wp.bits()) + 8);
    let mut n_cut: u32 = (wp.bits() / 5).max(12);
    loop {
        if let Some(b) = zeta_em_try(s, n_cut, wp, target) {
            return b;
        }
        n_cut *= 2;
    }
}

/// One Euler-Maclaurin attempt with cut-off `n`; `None` if the correction
/// terms stop decreasing before reaching `2^target`.
fn zeta_em_try(s: u32, n: u32, wp: Precision, target: i64) -> Option<Ball> {
    let mut acc = Ball::zero(wp);
    for k in 1..n {
        acc = acc + Ball::from_i64(i64::from(k), wp).pow_int(-i64::from(s)).ok()?;
    }
    let nb = Ball::from_i64(i64::from(n), wp);
    let n_pow = nb.pow_int(-i64::from(s)).ok()?; // N^{-s}
    // N^{1-s}/(s-1) + N^{-s}/2
    acc = acc + nb.mul_ball(&n_pow).div_u64(u64::from(s - 1)) + n_pow.mul_pow2(-1);
    let inv_n2 = nb.sqr().pow_int(-1).ok()?;
    let max_m = 4 * n as usize;
    let bern = bernoulli(2 * max_m.min(400) + 2);
    // term_k = B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    let mut rising = Rational::from(s); // s(s+1)...(s+2k-2) for k = 1
    let mut npow = n_pow.div_u64(u64::from(n)); // N^{-s-1}
    let mut prev_mag = f64::INFINITY;
    let mut k: u32 = 1;
    loop {
        if (2 * k + 2) as usize >= bern.len() {
            return None;
        }
        let coef = Rational::from(&bern[2 * k as usize] / crate::combin::factorial(2 * k)) * &rising;
        let term = npow.mul_rational(&coef);
        // next term magnitude, used for the remainder bound
        let next_rising = Rational::from(&rising * (s + 2 * k - 1)) * (s + 2 * k);
        let next_coef = Rational::from(&bern[2 * k as usize + 2] / crate::combin::factorial(2 * k + 2))
            * &next_rising;
        let next_term = npow.mul_ball(&inv_n2).mul_rational(&next_coef);
        acc = acc + term;
        let mag = next_term.mid().clone().abs();
        let lg = log2_of(&mag);
        if lg < target as f64 {
            let mut bound = Float::with_val(64, &mag);
            bound *= 2;
            acc.add_error(&bound);
            acc.add_error(next_term.rad());
            return Some(acc);
        }
        if lg >= prev_mag {
            return None;
        }
        prev_mag = lg;
        rising = next_rising;
        npow = npow.mul_ball(&inv_n2);
        k += 1;
    }
}

fn log2_of(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let e = x.get_exp().unwrap_or(0);
    let m = Float::with_val(64, x >> e).to_f64();
    f64::from(e) + m.log2()
}

/// `sum (-1)^n / n^s`: `-log 2` for `s = 1`, `(2^{1-s} - 1) zeta(s)` otherwise.
pub fn alt_zeta(s: u32, prec: Precision) -> Result<Ball> {
    if s == 0 {
        return Err(Error::Domain("alternating zeta needs s >= 1".into()));
    }
    cached(ConstantKind::AltZeta(s), prec, || {
        if s == 1 {
            return Ok(-log2(prec));
        }
        let z = zeta(s, prec)?;
        let f = Rational::from((1, Integer::from(1) << (s - 1))) - 1u32;
        Ok(z.mul_rational(&f))
    })
}

/// `Li_k(x)` for rational `|x| <= 3/4` by direct summation.
pub fn polylog(k: u32, x: &Rational, prec: Precision) -> Result<Ball> {
    if k == 0 {
        return Err(Error::Domain("polylog order must be >= 1".into()));
    }
    if Rational::from(x.abs_ref()) > Rational::from((3, 4)) {
        return Err(Error::Domain(format!("polylog argument {x} outside |x| <= 3/4")));
    }
    cached(ConstantKind::Polylog(k, x.clone()), prec, || {
        if *x == 0 {
            return Ok(Ball::zero(prec));
        }
        let wp = prec.guarded(24);
        let xb = Ball::from_rational(x, wp);
        let ax = x.clone().abs().to_f64();
        let target = -(f64::from(wp.bits()) + 8.0);
        let mut acc = Ball::zero(wp);
        let mut pow = Ball::one(wp);
        let mut n: u64 = 0;
        loop {
            n += 1;
            pow = pow.mul_ball(&xb);
            acc = acc + pow.mul_ball(&Ball::from_i64(n as i64, wp).pow_int(-i64::from(k))?);
            // tail <= |x|^{N+1} / (1 - |x|)
            let lg = (n + 1) as f64 * ax.log2() - (1.0 - ax).log2();
            if lg < target {
                acc.add_error(&pow2_rad(lg.ceil() as i64 + 1));
                return Ok(acc);
            }
        }
    })
}

/// `Li_k(1/2)`.
pub fn polylog_half(k: u32, prec: Precision) -> Result<Ball> {
    polylog(k, &Rational::from((1, 2)), prec)
}

/// `zeta(5bar, 1) = sum_n (-1)^n H_{n-1} / n^5`, summed with a certified
/// Euler transform.
pub fn alt_double_51(prec: Precision) -> Result<Ball> {
    cached(ConstantKind::AltDouble51, prec, || {
        let s = alt_double_51_series();
        series::evaluate(&s, prec, &EvalOptions::default())
    })
}

/// The defining series of `zeta(5bar, 1)`.
pub fn alt_double_51_series() -> Series {
    let mut s = Series::new(Rational::from(-1));
    s.add(
        Rational::from(1),
        vec![Factor::new(MhsIndex::plain(&[1]), 1)],
        5,
    );
    s
}

/// `zeta(5bar, 1)` from `N` terms of the alternating sum; the remainder is
/// enclosed between zero and the first omitted term.
pub fn alt_double_51_direct(prec: Precision, terms: u32) -> Ball {
    let wp = prec.guarded(24);
    let mut acc = Ball::zero(wp);
    let mut h_prev = Ball::zero(wp); // H_{n-1}
    let mut n: u32 = 1;
    let terms = terms.max(4);
    while n <= terms {
        let t = h_prev.mul_ball(&Ball::from_i64(i64::from(n), wp).pow_int(-5).expect("n > 0"));
        acc = if n % 2 == 0 { acc + t } else { acc - t };
        h_prev = h_prev + Ball::one(wp).div_u64(u64::from(n));
        n += 1;
    }
    // terms decrease from n = 2 on; the remainder lies between 0 and the next term
    let next = h_prev.mul_ball(&Ball::from_i64(i64::from(n), wp).pow_int(-5).expect("n > 0"));
    let signed = if n % 2 == 0 { next } else { -next };
    let lo_end = acc.clone();
    let hi_end = acc + signed;
    let lo = lo_end.lower().min(&hi_end.lower()).clone();
    let hi = lo_end.upper().max(&hi_end.upper()).clone();
    Ball::from_interval(&lo, &hi, wp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bits: u32) -> Precision {
        Precision::new(bits).unwrap()
    }

    #[test]
    fn log2_contains_value_and_roundtrips() {
        let l = log2(p(64));
        assert!((l.mid_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(l.exp().contains_rational(&Rational::from(2)));
        assert!(log2(p(128)).rad_f64() < l.rad_f64() || log2(p(128)).is_exact());
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(12);
        assert_eq!(b[1], Rational::from((-1, 2)));
        assert_eq!(b[2], Rational::from((1, 6)));
        assert_eq!(b[4], Rational::from((-1, 30)));
        assert_eq!(b[12], Rational::from((-691, 2730)));
        assert_eq!(b[7], 0);
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let z = zeta(2, p(256)).unwrap();
        let pi = Float::with_val(300, rug::float::Constant::Pi);
        let v = Float::with_val(300, &pi * &pi) / 6u32;
        let d = Float::with_val(300, z.mid() - &v).abs();
        assert!(d < 1e-70);
        assert!(zeta(1, p(64)).is_err());
    }

    #[test]
    fn alt_zeta_one_is_minus_log2() {
        let a = alt_zeta(1, p(128)).unwrap();
        assert!(a.intersects(&(-log2(p(128)))));
    }

    #[test]
    fn polylog_domain() {
        assert!(polylog(2, &Rational::from((4, 5)), p(64)).is_err());
        let l1 = polylog(1, &Rational::from((1, 2)), p(128)).unwrap();
        assert!(l1.intersects(&log2(p(128))));
    }

    #[test]
    fn alt_double_51_routes_agree() {
        let a = alt_double_51(p(256)).unwrap();
        let d = alt_double_51_direct(p(128), 2000);
        assert!(a.intersects(&d));
        assert!((a.mid_f64() - 0.026_399_148_793_116_947).abs() < 1e-15);
        assert!(a.rad_f64() < 1e-70);
    }
}
