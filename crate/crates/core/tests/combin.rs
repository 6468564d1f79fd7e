use euler_sums::combin::{alt_harmonic, bell_y, factorial, harmonic, mhs, stirling1, MhsIndex, MhsPart};
use rug::ops::Pow;
use rug::{Integer, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn h(n: u32, p: u32) -> Rational {
    harmonic(n, p)
}

/// Brute force over all chains `n >= n_1 > ... > n_k >= 1`.
fn mhs_brute(exps: &[(u32, bool)], n: u32) -> Rational {
    fn rec(exps: &[(u32, bool)], upper: u32) -> Rational {
        let Some(&(s, bar)) = exps.first() else {
            return Rational::from(1);
        };
        let mut acc = Rational::new();
        for m in 1..=upper {
            let mut t = Rational::from((1, Integer::from(m).pow(s)));
            if bar && m % 2 == 1 {
                t = -t;
            }
            acc += t * rec(&exps[1..], m - 1);
        }
        acc
    }
    rec(exps, n)
}

fn idx(exps: &[(u32, bool)]) -> MhsIndex {
    MhsIndex::new(exps.iter().map(|&(exp, bar)| MhsPart { exp, barred: bar }).collect())
}

#[test]
fn harmonic_examples() {
    assert_eq!(harmonic(1, 5), 1);
    assert_eq!(harmonic(3, 1), q(11, 6));
    assert_eq!(harmonic(3, 2), q(49, 36));
    assert_eq!(harmonic(0, 3), 0);
}

#[test]
fn alternating_harmonic_examples() {
    assert_eq!(alt_harmonic(1, 2), 1);
    assert_eq!(alt_harmonic(2, 1), q(1, 2));
    assert_eq!(alt_harmonic(3, 1), q(5, 6));
}

#[test]
fn stirling_examples() {
    assert_eq!(stirling1(0, 0), 1);
    assert_eq!(stirling1(4, 1), 6);
    assert_eq!(stirling1(4, 2), 11);
    assert_eq!(stirling1(3, 5), 0);
    assert_eq!(stirling1(5, 0), 0);
    assert_eq!(stirling1(0, 2), 0);
}

#[test]
fn bell_examples() {
    assert_eq!(bell_y(1, 7), h(7, 1));
    assert_eq!(bell_y(2, 2), q(7, 2));
    assert_eq!(bell_y(0, 5), 1);
}

#[test]
fn mhs_examples() {
    assert_eq!(mhs(&MhsIndex::empty(), 10), 1);
    assert_eq!(mhs(&MhsIndex::plain(&[1, 1]), 2), q(1, 2));
    assert_eq!(mhs(&MhsIndex::plain(&[2, 1]), 3), q(5, 12));
    assert_eq!(mhs(&MhsIndex::plain(&[1, 1, 1]), 2), 0);
}

#[test]
fn mhs_matches_brute_force_with_bars() {
    let cases: &[&[(u32, bool)]] = &[&[(2, true), (3, false)], &[(1, true), (1, true)], &[(2, false), (1, true), (1, false)]];
    for c in cases {
        for n in 0..12 {
            assert_eq!(mhs(&idx(c), n), mhs_brute(c, n), "{c:?} n={n}");
        }
    }
}

#[test]
fn harmonic_recurrence() {
    for p in 1..=5u32 {
        let mut prev = Rational::new();
        for n in 1..=200u32 {
            let cur = harmonic(n, p);
            assert_eq!(cur, prev.clone() + Rational::from((1, Integer::from(n).pow(p))));
            prev = cur;
        }
    }
}

#[test]
fn stirling_bridge_to_multiple_harmonic_sums() {
    for n in 1..=30u32 {
        for k in 1..=n {
            let rhs = Rational::from(factorial(n - 1)) * mhs(&MhsIndex::ones(k - 1), n - 1);
            assert_eq!(Rational::from(stirling1(n, k)), rhs, "s({n},{k})");
        }
    }
}

#[test]
fn bell_polynomials_match_printed_expansions() {
    for n in 1..=50u32 {
        let (h1, h2, h3, h4, h5) = (h(n, 1), h(n, 2), h(n, 3), h(n, 4), h(n, 5));
        let y = [
            h1.clone(),
            h1.clone().pow(2u32) + &h2,
            h1.clone().pow(3u32) + 3 * h1.clone() * &h2 + 2 * h3.clone(),
            h1.clone().pow(4u32) + 8 * h1.clone() * &h3 + 6 * h1.clone().pow(2u32) * &h2 + 3 * h2.clone().pow(2u32) + 6 * h4.clone(),
            h1.clone().pow(5u32)
                + 10 * h1.clone().pow(3u32) * &h2
                + 20 * h1.clone().pow(2u32) * &h3
                + 15 * h1.clone() * h2.clone().pow(2u32)
                + 30 * h1.clone() * &h4
                + 20 * h2.clone() * &h3
                + 24 * h5.clone(),
        ];
        for (k, expected) in y.iter().enumerate() {
            assert_eq!(bell_y(k as u32 + 1, n), *expected, "Y_{}({n})", k + 1);
        }
    }
}

#[test]
fn stirling_numbers_match_printed_expansions() {
    for n in 1..=50u32 {
        let f = Rational::from(factorial(n - 1));
        let (h1, h2, h3, h4) = (h(n - 1, 1), h(n - 1, 2), h(n - 1, 3), h(n - 1, 4));
        let s3 = f.clone() / 2 * (h1.clone().pow(2u32) - &h2);
        let s4 = f.clone() / 6 * (h1.clone().pow(3u32) - 3 * h1.clone() * &h2 + 2 * h3.clone());
        let s5 = f.clone() / 24
            * (h1.clone().pow(4u32) - 6 * h4.clone() - 6 * h1.clone().pow(2u32) * &h2 + 3 * h2.clone().pow(2u32) + 8 * h1.clone() * &h3);
        assert_eq!(Rational::from(stirling1(n, 1)), f, "s({n},1)");
        assert_eq!(Rational::from(stirling1(n, 2)), f.clone() * &h1, "s({n},2)");
        assert_eq!(Rational::from(stirling1(n, 3)), s3, "s({n},3)");
        assert_eq!(Rational::from(stirling1(n, 4)), s4, "s({n},4)");
        assert_eq!(Rational::from(stirling1(n, 5)), s5, "s({n},5)");
    }
}

#[test]
fn stuffle_product() {
    for a in 1..=3u32 {
        for b in 1..=3u32 {
            for n in 0..=40u32 {
                let lhs = mhs(&MhsIndex::plain(&[a]), n) * mhs(&MhsIndex::plain(&[b]), n);
                let rhs = mhs(&MhsIndex::plain(&[a, b]), n) + mhs(&MhsIndex::plain(&[b, a]), n) + mhs(&MhsIndex::plain(&[a + b]), n);
                assert_eq!(lhs, rhs, "a={a} b={b} n={n}");
            }
        }
    }
}
