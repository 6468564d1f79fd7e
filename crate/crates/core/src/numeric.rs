//! Midpoint-radius ball arithmetic over MPFR floats.
//!
//! A [`Ball`] stores an arbitrary-precision midpoint and a 30-bit radius that
//! is always rounded upwards. Every operation returns a ball that contains the
//! exact result whenever the inputs contain their exact values.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::{AddAssignRound, DivAssignRound, MulAssignRound};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Precision used for radii.
pub const RAD_PREC: u32 = 30;

/// Working precision in bits.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    bits: u32,
}

impl Precision {
    pub const MIN_BITS: u32 = 64;

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::Domain(format!(
                "precision must be at least {} bits, got {bits}",
                Self::MIN_BITS
            )));
        }
        Ok(Precision { bits })
    }

    /// Smallest precision carrying `digits` decimal digits.
    pub fn from_digits(digits: u32) -> Result<Self> {
        let bits = (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32;
        Self::new(bits.max(Self::MIN_BITS))
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Decimal digits represented by the binary precision.
    pub fn digits(self) -> u32 {
        (f64::from(self.bits) / std::f64::consts::LOG2_10).floor() as u32
    }

    /// Same precision plus `extra` guard bits.
    pub fn guarded(self, extra: u32) -> Self {
        Precision {
            bits: self.bits + extra,
        }
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision { bits: 256 }
    }
}

fn zero_rad() -> Float {
    Float::new(RAD_PREC)
}

/// Upper bound for the rounding error of a result `f` that carried ternary `ord`.
fn rounding_error(f: &Float, ord: Ordering) -> Float {
    if ord == Ordering::Equal {
        return zero_rad();
    }
    match f.get_exp() {
        Some(e) => {
            let mut r = Float::with_val(RAD_PREC, 1);
            r <<= e - f.prec() as i32;
            r
        }
        None => zero_rad(),
    }
}

fn up(x: &Float) -> Float {
    Float::with_val_round(RAD_PREC, x, Round::Up).0
}

fn abs_up(x: &Float) -> Float {
    Float::with_val_round(RAD_PREC, &*x.as_abs(), Round::Up).0
}

fn add_up(a: &Float, b: &Float) -> Float {
    let mut r = a.clone();
    r.add_assign_round(b, Round::Up);
    r
}

fn mul_up(a: &Float, b: &Float) -> Float {
    let mut r = a.clone();
    r.mul_assign_round(b, Round::Up);
    r
}

/// A real number enclosure `[mid - rad, mid + rad]`.
#[derive(Clone, Debug)]
pub struct Ball {
    mid: Float,
    rad: Float,
}

impl Ball {
    pub fn zero(prec: Precision) -> Ball {
        Ball {
            mid: Float::new(prec.bits()),
            rad: zero_rad(),
        }
    }

    pub fn one(prec: Precision) -> Ball {
        Ball::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: Precision) -> Ball {
        let (mid, ord) = Float::with_val_round(prec.bits(), v, Round::Nearest);
        let rad = rounding_error(&mid, ord);
        Ball { mid, rad }
    }

    pub fn from_integer(v: &Integer, prec: Precision) -> Ball {
        let (mid, ord) = Float::with_val_round(prec.bits(), v, Round::Nearest);
        let rad = rounding_error(&mid, ord);
        Ball { mid, rad }
    }

    /// Enclosure of an exact rational; the radius is zero for dyadic values
    /// representable at `prec`.
    pub fn from_rational(q: &Rational, prec: Precision) -> Ball {
        let (mid, ord) = Float::with_val_round(prec.bits(), q, Round::Nearest);
        let rad = rounding_error(&mid, ord);
        Ball { mid, rad }
    }

    /// Ball with the given midpoint and radius (radius rounded upwards).
    pub fn from_parts(mid: Float, rad: &Float) -> Ball {
        let rad = abs_up(rad);
        Ball { mid, rad }
    }

    /// Smallest ball covering the closed interval `[lo, hi]`.
    pub fn from_interval(lo: &Float, hi: &Float, prec: Precision) -> Ball {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let sum = Float::with_val(prec.bits(), lo + hi);
        let mid = sum / 2u32;
        let a = Float::with_val_round(prec.bits() + 8, hi - &mid, Round::Up).0;
        let b = Float::with_val_round(prec.bits() + 8, &mid - lo, Round::Up).0;
        let rad = up(if a > b { &a } else { &b });
        Ball { mid, rad }
    }

    /// Ball whose midpoint is `mid` and which still covers `[lo, hi]`.
    pub fn covering(mid: Float, lo: &Float, hi: &Float) -> Ball {
        let p = mid.prec() + 8;
        let a = Float::with_val_round(p, hi - &mid, Round::Up).0.abs();
        let b = Float::with_val_round(p, &mid - lo, Round::Up).0.abs();
        let rad = up(if a > b { &a } else { &b });
        Ball { mid, rad }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> Precision {
        Precision {
            bits: self.mid.prec(),
        }
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64_round(Round::Up)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Lower endpoint rounded down.
    pub fn lower(&self) -> Float {
        let p = self.mid.prec() + 2;
        let r = Float::with_val(p, &self.rad);
        Float::with_val_round(p, &self.mid - &r, Round::Down).0
    }

    /// Upper endpoint rounded up.
    pub fn upper(&self) -> Float {
        let p = self.mid.prec() + 2;
        let r = Float::with_val(p, &self.rad);
        Float::with_val_round(p, &self.mid + &r, Round::Up).0
    }

    /// Adds `e` (taken in absolute value) to the radius.
    pub fn add_error(&mut self, e: &Float) {
        self.rad = add_up(&self.rad, &abs_up(e));
    }

    /// Changes the midpoint precision, widening the radius by the rounding.
    pub fn with_prec(&self, prec: Precision) -> Ball {
        let (mid, ord) = Float::with_val_round(prec.bits(), &self.mid, Round::Nearest);
        let rad = add_up(&self.rad, &rounding_error(&mid, ord));
        Ball { mid, rad }
    }

    fn result_prec(&self, other: &Ball) -> u32 {
        self.mid.prec().max(other.mid.prec())
    }

    pub fn add_ball(&self, other: &Ball) -> Ball {
        let (mid, ord) =
            Float::with_val_round(self.result_prec(other), &self.mid + &other.mid, Round::Nearest);
        let rad = add_up(&add_up(&self.rad, &other.rad), &rounding_error(&mid, ord));
        Ball { mid, rad }
    }

    pub fn sub_ball(&self, other: &Ball) -> Ball {
        let (mid, ord) =
            Float::with_val_round(self.result_prec(other), &self.mid - &other.mid, Round::Nearest);
        let rad = add_up(&add_up(&self.rad, &other.rad), &rounding_error(&mid, ord));
        Ball { mid, rad }
    }

    pub fn mul_ball(&self, other: &Ball) -> Ball {
        let (mid, ord) =
            Float::with_val_round(self.result_prec(other), &self.mid * &other.mid, Round::Nearest);
        let mut rad = mul_up(&abs_up(&self.mid), &other.rad);
        rad = add_up(&rad, &mul_up(&abs_up(&other.mid), &self.rad));
        rad = add_up(&rad, &mul_up(&self.rad, &other.rad));
        rad = add_up(&rad, &rounding_error(&mid, ord));
        Ball { mid, rad }
    }

    /// Quotient; fails when the divisor enclosure contains zero.
    pub fn div_ball(&self, other: &Ball) -> Result<Ball> {
        let b_abs = Float::with_val_round(RAD_PREC, &*other.mid.as_abs(), Round::Down).0;
        let mut denom = b_abs;
        denom.add_assign_round(-other.rad.clone(), Round::Down);
        if denom <= 0 {
            return Err(Error::Domain("division by an enclosure containing zero".into()));
        }
        let (mid, ord) =
            Float::with_val_round(self.result_prec(other), &self.mid / &other.mid, Round::Nearest);
        let mut num = mul_up(&abs_up(&mid), &other.rad);
        // |a/b| computed at working precision may undershoot by one ulp
        num = add_up(&num, &mul_up(&rounding_error(&mid, Ordering::Less), &other.rad));
        num = add_up(&num, &self.rad);
        let mut rad = num;
        rad.div_assign_round(&denom, Round::Up);
        rad = add_up(&rad, &rounding_error(&mid, ord));
        Ok(Ball { mid, rad })
    }

    /// Exact scaling by a rational.
    pub fn mul_rational(&self, q: &Rational) -> Ball {
        if q.denom() == &1u32 {
            return self.mul_integer(q.numer());
        }
        let qb = Ball::from_rational(q, self.prec().guarded(0));
        self.mul_ball(&qb)
    }

    pub fn mul_integer(&self, k: &Integer) -> Ball {
        let (mid, ord) = Float::with_val_round(self.mid.prec(), &self.mid * k, Round::Nearest);
        let kf = Float::with_val_round(RAD_PREC, &*k.as_abs(), Round::Up).0;
        let rad = add_up(&mul_up(&self.rad, &kf), &rounding_error(&mid, ord));
        Ball { mid, rad }
    }

    pub fn mul_i64(&self, k: i64) -> Ball {
        self.mul_integer(&Integer::from(k))
    }

    /// Division by a positive machine integer.
    pub fn div_u64(&self, k: u64) -> Ball {
        assert!(k > 0, "division by zero");
        let (mid, ord) = Float::with_val_round(self.mid.prec(), &self.mid / k, Round::Nearest);
        let kf = Float::with_val_round(RAD_PREC, k, Round::Down).0;
        let mut rad = self.rad.clone();
        rad.div_assign_round(&kf, Round::Up);
        rad = add_up(&rad, &rounding_error(&mid, ord));
        Ball { mid, rad }
    }

    /// Multiplication by `2^k`, exact.
    pub fn mul_pow2(&self, k: i32) -> Ball {
        let mut mid = self.mid.clone();
        let mut rad = self.rad.clone();
        mid <<= k;
        rad <<= k;
        Ball { mid, rad }
    }

    pub fn neg_ball(&self) -> Ball {
        Ball {
            mid: -self.mid.clone(),
            rad: self.rad.clone(),
        }
    }

    pub fn abs(&self) -> Ball {
        if self.mid.is_sign_negative() {
            self.neg_ball()
        } else {
            self.clone()
        }
    }

    pub fn sqr(&self) -> Ball {
        self.mul_ball(self)
    }

    /// Integer power by binary exponentiation; negative exponents divide.
    pub fn pow_int(&self, k: i64) -> Result<Ball> {
        if k < 0 {
            let p = self.pow_int(-k)?;
            return Ball::one(self.prec()).div_ball(&p);
        }
        let mut result = Ball::one(self.prec());
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ball(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        Ok(result)
    }

    /// Natural logarithm; requires the enclosure to lie in `(0, inf)`.
    pub fn log(&self) -> Result<Ball> {
        let mut gap = Float::with_val_round(RAD_PREC, &self.mid, Round::Down).0;
        gap.add_assign_round(-self.rad.clone(), Round::Down);
        if gap <= 0 {
            return Err(Error::Domain("log of an enclosure not contained in (0, inf)".into()));
        }
        let (mid, ord) = Float::with_val_round(self.mid.prec(), self.mid.ln_ref(), Round::Nearest);
        let mut rad = self.rad.clone();
        rad.div_assign_round(&gap, Round::Up);
        rad = add_up(&rad, &rounding_error(&mid, ord));
        Ok(Ball { mid, rad })
    }

    pub fn exp(&self) -> Ball {
        let (mid, ord) = Float::with_val_round(self.mid.prec(), self.mid.exp_ref(), Round::Nearest);
        let em = Float::with_val_round(RAD_PREC, self.mid.exp_ref(), Round::Up).0;
        let er = Float::with_val_round(RAD_PREC, self.rad.exp_m1_ref(), Round::Up).0;
        let rad = add_up(&mul_up(&em, &er), &rounding_error(&mid, ord));
        Ball { mid, rad }
    }

    /// Square root; requires the enclosure to lie in `(0, inf)`.
    pub fn sqrt(&self) -> Result<Ball> {
        let mut gap = Float::with_val_round(RAD_PREC, &self.mid, Round::Down).0;
        gap.add_assign_round(-self.rad.clone(), Round::Down);
        if gap <= 0 {
            return Err(Error::Domain("sqrt of an enclosure not contained in (0, inf)".into()));
        }
        let (mid, ord) = Float::with_val_round(self.mid.prec(), self.mid.sqrt_ref(), Round::Nearest);
        let root = Float::with_val_round(RAD_PREC, gap.sqrt_ref(), Round::Down).0;
        let mut rad = self.rad.clone();
        rad.div_assign_round(&root, Round::Up);
        rad = add_up(&rad, &rounding_error(&mid, ord));
        Ok(Ball { mid, rad })
    }

    /// True when `q` lies in the enclosure (exact comparison).
    pub fn contains_rational(&self, q: &Rational) -> bool {
        let m = self.mid.to_rational().expect("finite midpoint");
        let r = self.rad.to_rational().expect("finite radius");
        let d = Rational::from(q - &m).abs();
        d <= r
    }

    /// True when the two enclosures share a point (exact comparison).
    pub fn intersects(&self, other: &Ball) -> bool {
        let a = self.mid.to_rational().expect("finite midpoint");
        let b = other.mid.to_rational().expect("finite midpoint");
        let ra = self.rad.to_rational().expect("finite radius");
        let rb = other.rad.to_rational().expect("finite radius");
        Rational::from(&a - &b).abs() <= ra + rb
    }

    /// True when every point of `self` lies in `other`.
    pub fn is_inside(&self, other: &Ball) -> bool {
        let a = self.mid.to_rational().expect("finite midpoint");
        let b = other.mid.to_rational().expect("finite midpoint");
        let ra = self.rad.to_rational().expect("finite radius");
        let rb = other.rad.to_rational().expect("finite radius");
        Rational::from(&a - &b).abs() + ra <= rb
    }

    /// |mid(self) - mid(other)| as a double.
    pub fn mid_distance(&self, other: &Ball) -> f64 {
        let p = self.result_prec(other) + 16;
        Float::with_val(p, &self.mid - &other.mid).abs().to_f64()
    }

    /// Decimal rendering with as many digits as the radius justifies.
    pub fn to_decimal(&self, max_digits: usize) -> String {
        let digits = self.justified_digits().min(max_digits).max(1);
        let text = format!("{:.*e}", digits.saturating_sub(1), self.mid);
        format!("{text} +/- {:.3e}", self.rad_f64())
    }

    /// Number of significant decimal digits supported by the radius.
    pub fn justified_digits(&self) -> usize {
        if self.rad.is_zero() {
            return self.prec().digits() as usize;
        }
        let m = self.mid.to_f64().abs();
        let r = self.rad.to_f64();
        let lm = if m > 0.0 && m.is_finite() { m.log10() } else { 0.0 };
        let lr = if r > 0.0 && r.is_finite() {
            r.log10()
        } else {
            let e = self.rad.get_exp().unwrap_or(0);
            f64::from(e) * std::f64::consts::LOG10_2
        };
        let d = (lm - lr).floor();
        if d < 1.0 {
            1
        } else {
            d as usize
        }
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(60))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&Ball> for &Ball {
            type Output = Ball;
            fn $m(self, rhs: &Ball) -> Ball {
                self.$inner(rhs)
            }
        }
        impl $tr<Ball> for Ball {
            type Output = Ball;
            fn $m(self, rhs: Ball) -> Ball {
                self.$inner(&rhs)
            }
        }
        impl $tr<&Ball> for Ball {
            type Output = Ball;
            fn $m(self, rhs: &Ball) -> Ball {
                self.$inner(rhs)
            }
        }
        impl $tr<Ball> for &Ball {
            type Output = Ball;
            fn $m(self, rhs: Ball) -> Ball {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ball);
forward_binop!(Sub, sub, sub_ball);
forward_binop!(Mul, mul, mul_ball);

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        self.neg_ball()
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        self.neg_ball()
    }
}

/// Sum of balls, starting from an exact zero.
pub fn sum<'a, I: IntoIterator<Item = &'a Ball>>(items: I, prec: Precision) -> Ball {
    items.into_iter().fold(Ball::zero(prec), |acc, b| acc + b)
}

/// Upper bound as a low-precision float, rounded towards +inf.
pub fn upper_bound_f(x: &Float) -> Float {
    up(x)
}

/// Division of two non-negative radius-like quantities, rounded up.
pub fn div_up(a: &Float, b: &Float) -> Float {
    let mut r = Float::with_val(RAD_PREC, a);
    r.div_assign_round(b, Round::Up);
    r
}

/// `a + b` rounded up at radius precision.
pub fn add_rad(a: &Float, b: &Float) -> Float {
    add_up(a, b)
}

/// `a * b` rounded up at radius precision.
pub fn mul_rad(a: &Float, b: &Float) -> Float {
    mul_up(a, b)
}

/// Rounded-up low precision copy of a non-negative quantity.
pub fn rad_of(x: &Float) -> Float {
    abs_up(x)
}

/// Rounded-up radius-precision representation of a rational magnitude.
pub fn rad_of_rational(q: &Rational) -> Float {
    Float::with_val_round(RAD_PREC, &*q.as_abs(), Round::Up).0
}

/// `2^e` as a radius.
pub fn pow2_rad(e: i64) -> Float {
    let mut r = Float::with_val(RAD_PREC, 1);
    r <<= e as i32;
    r
}
