use euler_sums::constants::{alt_double_51, alt_zeta, log2, polylog, polylog_half, zeta, ConstantKind, ConstantRequest};
use euler_sums::numeric::{Ball, Precision};
use euler_sums::series::SumSpec;
use euler_sums::symbolic::{lookup, Atom, ClosedForm, Monomial};
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

fn p(bits: u32) -> Precision {
    Precision::new(bits).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn all_requests(prec: Precision) -> Vec<ConstantRequest> {
    let mut kinds = vec![ConstantKind::Log2, ConstantKind::AltDouble51];
    kinds.extend([2, 3, 4, 5, 6, 7, 9, 11].map(ConstantKind::Zeta));
    kinds.extend((1..=6).map(ConstantKind::AltZeta));
    for k in 1..=6 {
        for x in [q(1, 2), q(-1, 2), q(3, 4), q(1, 4)] {
            kinds.push(ConstantKind::Polylog(k, x));
        }
    }
    kinds.into_iter().map(|kind| ConstantRequest { kind, prec }).collect()
}

/// Interval `[lo, hi]` as a ball.
fn interval(lo: &Float, hi: &Float, prec: Precision) -> Ball {
    Ball::from_interval(lo, hi, prec)
}

#[test]
fn doubling_precision_shrinks_and_intersects() {
    for bits in [64, 128, 256] {
        for (lo, hi) in all_requests(p(bits)).into_iter().zip(all_requests(p(2 * bits))) {
            let a = lo.evaluate().unwrap();
            let b = hi.evaluate().unwrap();
            assert!(a.intersects(&b), "{:?} at {bits}", lo.kind);
            assert!(b.rad_f64() < a.rad_f64() || (a.is_exact() && b.is_exact()), "{:?} at {bits}", lo.kind);
        }
    }
}

#[test]
fn cache_hits_are_bit_identical() {
    for r in all_requests(p(192)) {
        let a = r.evaluate().unwrap();
        let b = r.evaluate().unwrap();
        assert_eq!(a.mid(), b.mid());
        assert_eq!(a.rad(), b.rad());
    }
}

#[test]
fn log2_against_binary_series() {
    // sum_{n<=N} 1/(n 2^n) < log 2 < partial + 1/((N+1) 2^N)
    let n_terms = 80u32;
    let mut partial = Rational::new();
    for n in 1..=n_terms {
        partial += Rational::from((1, Integer::from(n) << n));
    }
    let tail = Rational::from((1, Integer::from(n_terms + 1) << n_terms));
    for bits in [64, 128, 256] {
        let l = log2(p(bits));
        assert!(l.rad_f64() <= 2f64.powi(-(bits as i32 - 8)));
        let lo = Float::with_val(300, &partial);
        let hi = Float::with_val(300, partial.clone() + &tail);
        assert!(l.intersects(&interval(&lo, &hi, p(300))));
        assert!(l.exp().contains_rational(&Rational::from(2)));
    }
    assert!((log2(p(64)).mid_f64() - 0.693_147_180_559_945_3).abs() < 1e-15);
}

#[test]
fn zeta_values() {
    let prec = p(256);
    assert!(zeta(1, prec).is_err());
    let pi = Float::with_val(300, rug::float::Constant::Pi);
    let z2 = Float::with_val(300, &pi * &pi) / 6u32;
    assert!(zeta(2, prec).unwrap().intersects(&Ball::from_parts(z2, &Float::with_val(30, 1e-85))));
    // direct summation of 10^6 terms; tail between 1/(2(N+1)^2) and 1/(2N^2)
    let n = 1_000_000u32;
    let mut s = Float::with_val(160, 0);
    for k in (1..=n).rev() {
        let kf = Float::with_val(160, k);
        s += Float::with_val(160, kf.clone() * &kf * &kf).recip();
    }
    let nf = Float::with_val(160, n);
    let lo = Float::with_val(160, &s + Float::with_val(160, (nf.clone() + 1u32).square() * 2u32).recip()) - 1e-40;
    let hi = Float::with_val(160, &s + Float::with_val(160, nf.square() * 2u32).recip()) + 1e-40;
    assert!(zeta(3, prec).unwrap().intersects(&interval(&lo, &hi, p(160))));
}

#[test]
fn alternating_zeta_values() {
    let prec = p(256);
    assert!(alt_zeta(1, prec).unwrap().intersects(&-log2(prec)));
    let z2 = zeta(2, prec).unwrap();
    assert!(alt_zeta(2, prec).unwrap().intersects(&z2.mul_rational(&q(-1, 2))));
    let z5 = zeta(5, prec).unwrap();
    assert!(alt_zeta(5, prec).unwrap().intersects(&z5.mul_rational(&q(-15, 16))));
    assert!(alt_zeta(5, prec).unwrap().mid_f64() < 0.0);
}

#[test]
fn alternating_zeta_matches_direct_summation() {
    // partial sums S_N and S_{N+1} of sum (-1)^n/n^s bracket the limit
    let n = 100_000u32;
    for s in 1..=4u32 {
        let mut acc = Float::with_val(128, 0);
        for k in (1..=n).rev() {
            let t = Float::with_val(128, Float::with_val(128, k).pow(s)).recip();
            if k % 2 == 0 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        let next = Float::with_val(128, Float::with_val(128, n + 1).pow(s)).recip();
        let other = if (n + 1) % 2 == 0 { Float::with_val(128, &acc + &next) } else { Float::with_val(128, &acc - &next) };
        let lo = Float::with_val(128, acc.clone().min(&other)) - 1e-30;
        let hi = Float::with_val(128, acc.max(&other)) + 1e-30;
        assert!(alt_zeta(s, p(128)).unwrap().intersects(&interval(&lo, &hi, p(128))), "s={s}");
    }
}

#[test]
fn polylog_values() {
    let prec = p(256);
    let l2 = log2(prec);
    let z2 = zeta(2, prec).unwrap();
    let z3 = zeta(3, prec).unwrap();
    assert!(polylog(1, &q(1, 2), prec).unwrap().intersects(&l2));
    let li2 = z2.sub_ball(&l2.sqr()).mul_rational(&q(1, 2));
    assert!(polylog_half(2, prec).unwrap().mid_distance(&li2) < 1e-70);
    assert!(polylog_half(2, prec).unwrap().intersects(&li2));
    let li3 = z3.mul_rational(&q(7, 8)) - z2.mul_ball(&l2).mul_rational(&q(1, 2)) + l2.pow_int(3).unwrap().mul_rational(&q(1, 6));
    assert!(polylog_half(3, prec).unwrap().intersects(&li3));
    assert!(polylog(2, &q(4, 5), prec).is_err());
    assert!(polylog(2, &q(-4, 5), prec).is_err());
    assert!(polylog(0, &q(1, 2), prec).is_err());
}

#[test]
fn alternating_double_zeta() {
    let prec = p(256);
    let v = alt_double_51(prec).unwrap();
    // the n = 2 term (+1/32) dominates
    assert!(v.mid_f64() > 0.0 && v.mid_f64() < 1.0 / 32.0);
    // partial sums with N and N+1 terms bracket the value
    let bits = 128;
    let mut acc = Rational::new();
    let mut h_prev = Rational::new();
    let n = 60u32;
    let mut sums = Vec::new();
    for k in 1..=n + 1 {
        let t = h_prev.clone() / Rational::from(Integer::from(k).pow(5));
        if k % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
        h_prev += Rational::from((1, k));
        if k >= n {
            sums.push(acc.clone());
        }
    }
    let (a, b) = (Float::with_val(bits, &sums[0]), Float::with_val(bits, &sums[1]));
    let lo = Float::with_val(bits, a.clone().min(&b)) - 1e-35;
    let hi = Float::with_val(bits, a.max(&b)) + 1e-35;
    assert!(v.intersects(&interval(&lo, &hi, p(bits))));
}

#[test]
fn alternating_double_zeta_consistent_with_weight_six_closed_form() {
    // solve the S_{1,5}(1/2) closed form for the zeta(5bar,1) coefficient
    let prec = p(256);
    let cf = lookup("5.12").unwrap().closed_form().unwrap();
    let zb = Monomial::atom(Atom::Zb51);
    let c = cf.coefficient(&zb);
    let mut rest = cf.clone();
    rest.add_term(zb, -c.clone());
    let sum = euler_sums::series::euler_type_sum(&SumSpec::half(&[1], 5), prec).unwrap();
    let solved = sum.sub_ball(&rest.evaluate(prec).unwrap()).mul_rational(&Rational::from(c.recip_ref()));
    let v = alt_double_51(prec).unwrap();
    assert!(v.intersects(&solved));
    assert!(v.mid_distance(&solved) < 1e-60);
    assert!(!ClosedForm::atom(Atom::Zb51).is_zero());
}
