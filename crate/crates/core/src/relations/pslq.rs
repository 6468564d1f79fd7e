//! PSLQ integer-relation detection in fixed-point big-integer arithmetic.

use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::numeric::{Ball, Precision};

/// Input to [`pslq`]: the target value first, then the basis values.
#[derive(Clone, Debug)]
pub struct RelationProblem {
    pub values: Vec<Ball>,
    /// Relations with a coefficient of `2^max_coeff_bits` or more are not searched for.
    pub max_coeff_bits: u32,
    pub prec: Precision,
    pub max_steps: usize,
}

impl RelationProblem {
    pub const DEFAULT_COEFF_BITS: u32 = 40;
    pub const DEFAULT_MAX_STEPS: usize = 100_000;

    /// Checks that every radius is at most `2^(-bits/2)`.
    pub fn new(values: Vec<Ball>, prec: Precision) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Domain("relation search needs at least two values".into()));
        }
        let limit = 2f64.powi(-(prec.bits() as i32 / 2));
        if let Some(i) = values.iter().position(|v| !(v.rad_f64() <= limit)) {
            return Err(Error::Accuracy(format!(
                "value {i} has radius {:.3e}, above the 2^-{} required at {} bits",
                values[i].rad_f64(),
                prec.bits() / 2,
                prec.bits()
            )));
        }
        Ok(RelationProblem {
            values,
            max_coeff_bits: Self::DEFAULT_COEFF_BITS,
            prec,
            max_steps: Self::DEFAULT_MAX_STEPS,
        })
    }

    pub fn with_max_coeff_bits(mut self, bits: u32) -> Self {
        self.max_coeff_bits = bits;
        self
    }

    /// `2^(-bits/4)`.
    pub fn threshold(&self) -> f64 {
        2f64.powi(-(self.prec.bits() as i32 / 4))
    }

    /// Checks a candidate against the enclosures: the combination must contain
    /// zero and its midpoint must be below the detection threshold.
    pub fn confirms(&self, relation: &[Integer]) -> bool {
        if relation.len() != self.values.len() || relation.iter().all(|a| *a == 0) {
            return false;
        }
        let wp = self.prec.guarded(64);
        let mut acc = Ball::zero(wp);
        for (a, v) in relation.iter().zip(&self.values) {
            acc = acc + v.mul_integer(a);
        }
        let zero = Ball::zero(wp);
        acc.intersects(&zero) && acc.mid_f64().abs() <= self.threshold()
    }
}

/// Result of a relation search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PslqOutcome {
    /// Integers `a` with `sum a_i v_i = 0` within the enclosures.
    Found(Vec<Integer>),
    /// Every relation has Euclidean norm at least `norm_bound`, which exceeds the coefficient bound.
    NoRelationWithinBound { norm_bound: Integer },
    /// The working precision ran out before either of the above could be decided.
    PrecisionExhausted,
}

fn round_div(a: &Integer, b: &Integer) -> Integer {
    // nearest integer to a/b
    let (num, den) = if *b < 0 {
        (Integer::from(-a), Integer::from(-b))
    } else {
        (a.clone(), b.clone())
    };
    let twice = Integer::from(&num << 1u32) + &den;
    twice.div_rem_floor(Integer::from(&den << 1u32)).0
}

fn to_fixed(b: &Ball, bits: u32) -> Integer {
    let f = Float::with_val(b.mid().prec() + bits + 8, b.mid()) << bits;
    f.to_integer().expect("finite midpoint")
}

/// Runs PSLQ on the midpoints of `problem.values`.
///
/// Candidates are read off the columns of the inverse reduction matrix when a
/// component of the reduced vector drops below the detection threshold; they are
/// returned only if [`RelationProblem::confirms`] accepts them.
pub fn pslq(problem: &RelationProblem) -> Result<PslqOutcome> {
    let n = problem.values.len();
    if problem.values.iter().any(|v| v.intersects(&Ball::zero(v.prec()))) {
        return Err(Error::Domain("relation search needs nonzero values".into()));
    }
    let p = problem.prec.bits() + 60;
    let one = Integer::from(1) << p;
    let max_coeff = Integer::from(1) << problem.max_coeff_bits;
    let tol = Integer::from(1) << (p - problem.prec.bits() / 4);
    let noise = Integer::from(1) << 40u32;

    let x: Vec<Integer> = problem.values.iter().map(|v| to_fixed(v, p)).collect();
    // g = sqrt(4/3)
    let g = Integer::from(Integer::from(&one * &one) * 4u32 / 3u32).sqrt();

    let mut bm: Vec<Vec<Integer>> = (0..n)
        .map(|i| (0..n).map(|j| Integer::from(i32::from(i == j))).collect())
        .collect();
    let mut h = vec![vec![Integer::new(); n - 1]; n];

    let mut s = vec![Integer::new(); n];
    for k in 0..n {
        let mut t = Integer::new();
        for xj in &x[k..] {
            t += Integer::from(xj * xj) >> p;
        }
        s[k] = Integer::from(t << p).sqrt();
    }
    let t = s[0].clone();
    let mut y: Vec<Integer> = x.iter().map(|xk| Integer::from(xk << p) / &t).collect();
    for sk in s.iter_mut() {
        *sk = Integer::from(&*sk << p) / &t;
    }
    for i in 0..n {
        for j in 0..n - 1 {
            h[i][j] = if j > i {
                Integer::new()
            } else if j == i {
                if s[i] != 0 {
                    Integer::from(&s[i + 1] << p) / &s[i]
                } else {
                    Integer::new()
                }
            } else {
                let d = Integer::from(&s[j] * &s[j + 1]);
                if d != 0 {
                    -(Integer::from(Integer::from(&y[i] * &y[j]) << p) / d)
                } else {
                    Integer::new()
                }
            };
        }
    }

    // subtracts the nearest-integer multiple of row j from row i; false when the pivot vanishes
    let reduce = |i: usize, j: usize, h: &mut [Vec<Integer>], y: &mut [Integer], bm: &mut [Vec<Integer>]| -> bool {
        if h[j][j] == 0 {
            return false;
        }
        let t = round_div(&h[i][j], &h[j][j]);
        if t == 0 {
            return true;
        }
        let ty = Integer::from(&t * &y[i]);
        y[j] += ty;
        for k in 0..=j {
            let v = Integer::from(&t * &h[j][k]);
            h[i][k] -= v;
        }
        for k in 0..n {
            let w = Integer::from(&t * &bm[k][i]);
            bm[k][j] += w;
        }
        true
    };

    for i in 1..n {
        for j in (0..i).rev() {
            reduce(i, j, &mut h, &mut y, &mut bm);
        }
    }

    for _ in 0..problem.max_steps {
        // exchange step
        let mut m = 0;
        let mut best = Integer::from(-1);
        let mut gpow = g.clone();
        for i in 0..n - 1 {
            let sz = Integer::from(&gpow * &*h[i][i].as_abs());
            if sz > best {
                best = sz;
                m = i;
            }
            gpow = Integer::from(&gpow * &g) >> p;
        }
        y.swap(m, m + 1);
        h.swap(m, m + 1);
        for row in bm.iter_mut() {
            row.swap(m, m + 1);
        }
        // corner step
        if m + 2 < n {
            let t0 = Integer::from(Integer::from(h[m][m].square_ref()) + h[m][m + 1].square_ref()).sqrt();
            if t0 == 0 {
                return Ok(PslqOutcome::PrecisionExhausted);
            }
            let t1 = Integer::from(&h[m][m] << p) / &t0;
            let t2 = Integer::from(&h[m][m + 1] << p) / &t0;
            for row in h.iter_mut().skip(m) {
                let t3 = row[m].clone();
                let t4 = row[m + 1].clone();
                row[m] = (Integer::from(&t1 * &t3) + Integer::from(&t2 * &t4)) >> p;
                row[m + 1] = (Integer::from(&t1 * &t4) - Integer::from(&t2 * &t3)) >> p;
            }
        }
        // reduction step
        for i in m + 1..n {
            for j in (0..=(i - 1).min(m + 1)).rev() {
                if !reduce(i, j, &mut h, &mut y, &mut bm) {
                    break;
                }
            }
        }
        // relation check
        let mut smallest: Option<Integer> = None;
        for i in 0..n {
            let err = y[i].clone().abs();
            if err < tol {
                let rel: Vec<Integer> = (0..n).map(|j| bm[j][i].clone()).collect();
                if rel.iter().all(|v| *v.as_abs() < max_coeff) && problem.confirms(&rel) {
                    return Ok(PslqOutcome::Found(normalize(rel)));
                }
            }
            if smallest.as_ref().is_none_or(|s| err < *s) {
                smallest = Some(err);
            }
        }
        if smallest.is_some_and(|s| s < noise) {
            return Ok(PslqOutcome::PrecisionExhausted);
        }
        // lower bound on the norm of any relation
        let recnorm = h.iter().flatten().map(|v| v.clone().abs()).max().unwrap_or_default();
        if recnorm != 0 {
            let norm = (Integer::from(Integer::from(1) << (2 * p)) / recnorm >> p) / 100u32;
            if norm >= max_coeff {
                return Ok(PslqOutcome::NoRelationWithinBound { norm_bound: norm });
            }
        }
    }
    Ok(PslqOutcome::PrecisionExhausted)
}

/// Divides by the content and makes the first nonzero entry positive.
fn normalize(mut rel: Vec<Integer>) -> Vec<Integer> {
    let g = rel.iter().fold(Integer::new(), |acc, v| acc.gcd(v));
    if g > 1 {
        for v in rel.iter_mut() {
            *v /= &g;
        }
    }
    if rel.iter().find(|v| **v != 0).is_some_and(|v| *v < 0) {
        for v in rel.iter_mut() {
            *v = Integer::from(-&*v);
        }
    }
    rel
}
