//! Exact rational kernels: harmonic numbers, Stirling numbers of the first
//! kind, complete Bell polynomials and (alternating) multiple harmonic sums.

use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

/// `H_n^{(p)} = sum_{j=1}^n 1/j^p`.
pub fn harmonic(n: u32, p: u32) -> Rational {
    let mut acc = Rational::new();
    for j in 1..=n {
        acc += Rational::from((1, Integer::from(j).pow(p)));
    }
    acc
}

/// `L_n(p) = sum_{j=1}^n (-1)^{j-1}/j^p`.
pub fn alt_harmonic(n: u32, p: u32) -> Rational {
    let mut acc = Rational::new();
    for j in 1..=n {
        let t = Rational::from((1, Integer::from(j).pow(p)));
        if j % 2 == 1 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

/// Unsigned Stirling number of the first kind `s(n, k)`.
pub fn stirling1(n: u32, k: u32) -> Integer {
    if k > n {
        return Integer::new();
    }
    // row[j] holds s(i, j) for the current i
    let mut row = vec![Integer::new(); (k + 1) as usize];
    row[0] = Integer::from(1);
    for i in 1..=n {
        let hi = k.min(i) as usize;
        for j in (1..=hi).rev() {
            let prev = Integer::from(&row[j] * (i - 1));
            row[j] = Integer::from(&row[j - 1] + &prev);
        }
        row[0] = Integer::new();
    }
    row[k as usize].clone()
}

/// Table of `s(i, j)` for `0 <= i <= n`, `0 <= j <= k`.
pub fn stirling1_table(n: u32, k: u32) -> Vec<Vec<Integer>> {
    let mut t = vec![vec![Integer::new(); (k + 1) as usize]; (n + 1) as usize];
    t[0][0] = Integer::from(1);
    for i in 1..=n as usize {
        for j in 1..=k as usize {
            let a = Integer::from(&t[i - 1][j] * (i as u32 - 1));
            t[i][j] = Integer::from(&t[i - 1][j - 1] + &a);
        }
    }
    t
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

pub fn binomial(n: u32, k: u32) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n, k))
}

/// Complete exponential Bell polynomial `Y_k(n)` evaluated at
/// `x_r = (r-1)! H_n^{(r)}`, using `Y_{j+1} = sum_i C(j,i) x_{i+1} Y_{j-i}`.
pub fn bell_y(k: u32, n: u32) -> Rational {
    let x: Vec<Rational> = (1..=k)
        .map(|r| harmonic(n, r) * factorial(r - 1))
        .collect();
    bell_y_from(&x, k)
}

/// Complete Bell polynomial `Y_k(x_1, ..., x_k)` by recurrence.
pub fn bell_y_from(x: &[Rational], k: u32) -> Rational {
    let mut y: Vec<Rational> = vec![Rational::from(1)];
    for j in 0..k {
        let mut next = Rational::new();
        for i in 0..=j {
            next += Rational::from(&x[i as usize] * &y[(j - i) as usize]) * binomial(j, i);
        }
        y.push(next);
    }
    y.swap_remove(k as usize)
}

/// One position of a multiple harmonic sum index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MhsPart {
    pub exp: u32,
    pub barred: bool,
}

/// Index `(s_1, ..., s_k)` of a multiple harmonic sum, outermost first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MhsIndex {
    pub parts: Vec<MhsPart>,
}

impl MhsIndex {
    pub fn new(parts: Vec<MhsPart>) -> Self {
        assert!(parts.iter().all(|p| p.exp >= 1), "MHS exponents must be positive");
        MhsIndex { parts }
    }

    pub fn empty() -> Self {
        MhsIndex { parts: Vec::new() }
    }

    /// Unbarred index from exponents.
    pub fn plain(exps: &[u32]) -> Self {
        Self::new(exps.iter().map(|&e| MhsPart { exp: e, barred: false }).collect())
    }

    /// `{1}_k`.
    pub fn ones(k: u32) -> Self {
        Self::plain(&vec![1; k as usize])
    }

    /// Single barred part `q-bar`.
    pub fn bar(q: u32) -> Self {
        Self::new(vec![MhsPart { exp: q, barred: true }])
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().map(|p| p.exp).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn has_bar(&self) -> bool {
        self.parts.iter().any(|p| p.barred)
    }

    /// True for `{1}_k` without bars.
    pub fn is_all_ones(&self) -> bool {
        self.parts.iter().all(|p| p.exp == 1 && !p.barred)
    }
}

impl fmt::Display for MhsIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .parts
            .iter()
            .map(|p| if p.barred { format!("{}b", p.exp) } else { p.exp.to_string() })
            .collect();
        write!(f, "({})", items.join(","))
    }
}

/// `zeta_n(idx)`; a barred part contributes the sign `(-1)^{n_j}`.
pub fn mhs(idx: &MhsIndex, n: u32) -> Rational {
    let d = idx.depth();
    if d == 0 {
        return Rational::from(1);
    }
    if (n as usize) < d {
        return Rational::new();
    }
    // suffix[j] = zeta_m(parts[j..]) for the current m; suffix[d] = 1
    let mut suffix = vec![Rational::new(); d + 1];
    suffix[d] = Rational::from(1);
    for m in 1..=n {
        for j in 0..d {
            let part = idx.parts[j];
            let mut t = Rational::from((1, Integer::from(m).pow(part.exp)));
            if part.barred && m % 2 == 1 {
                t = -t;
            }
            let add = t * &suffix[j + 1];
            suffix[j] += add;
        }
    }
    suffix.swap_remove(0)
}

/// Monomial `prod_r (H_n^{(r)})^{e_r}`: map from order `r` to exponent.
pub type HMonomial = BTreeMap<u32, u32>;

/// Polynomial in the harmonic numbers `H_n^{(r)}` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HarmonicPoly {
    pub terms: BTreeMap<HMonomial, Rational>,
}

impl HarmonicPoly {
    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(HMonomial::new(), Rational::from(1));
        HarmonicPoly { terms }
    }

    /// The variable `H_n^{(r)}`.
    pub fn var(r: u32) -> Self {
        let mut m = HMonomial::new();
        m.insert(r, 1);
        let mut terms = BTreeMap::new();
        terms.insert(m, Rational::from(1));
        HarmonicPoly { terms }
    }

    pub fn add_term(&mut self, m: HMonomial, c: Rational) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(m.clone()).or_default();
        *e += c;
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = HarmonicPoly::default();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), Rational::from(v * c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = HarmonicPoly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                for (r, e) in mb {
                    *m.entry(*r).or_insert(0) += e;
                }
                out.add_term(m, Rational::from(ca * cb));
            }
        }
        out
    }

    /// Exact value when `H^{(r)}` is replaced by `values(r)`.
    pub fn eval_with<F: Fn(u32) -> Rational>(&self, values: F) -> Rational {
        let mut acc = Rational::new();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (r, e) in m {
                t *= Pow::pow(values(*r), *e as i32);
            }
            acc += t;
        }
        acc
    }

    /// Exact value at index `n`.
    pub fn eval_at(&self, n: u32) -> Rational {
        self.eval_with(|r| harmonic(n, r))
    }
}

/// `Y_k` as a polynomial in `H^{(r)}`, built from the Bell recurrence.
pub fn bell_poly(k: u32) -> HarmonicPoly {
    let mut y = vec![HarmonicPoly::one()];
    for j in 0..k {
        let mut next = HarmonicPoly::default();
        for i in 0..=j {
            let x = HarmonicPoly::var(i + 1).scale(&Rational::from(factorial(i)));
            let c = Rational::from(binomial(j, i));
            next = next.add(&x.mul(&y[(j - i) as usize]).scale(&c));
        }
        y.push(next);
    }
    y.swap_remove(k as usize)
}

/// `zeta_n({1}_k)` as a polynomial in the power sums `H_n^{(r)}` (Newton identities).
pub fn ones_poly(k: u32) -> HarmonicPoly {
    let mut e = vec![HarmonicPoly::one()];
    for j in 1..=k {
        let mut acc = HarmonicPoly::default();
        for i in 1..=j {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            let t = e[(j - i) as usize].mul(&HarmonicPoly::var(i));
            acc = acc.add(&t.scale(&Rational::from(sign)));
        }
        e.push(acc.scale(&Rational::from((1, j))));
    }
    e.swap_remove(k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(1, 5), 1);
        assert_eq!(harmonic(3, 1), q(11, 6));
        assert_eq!(harmonic(3, 2), q(49, 36));
        assert_eq!(harmonic(0, 3), 0);
    }

    #[test]
    fn alt_harmonic_examples() {
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
        let t = stirling1_table(8, 8);
        for n in 0..=8 {
            for k in 0..=8 {
                assert_eq!(t[n as usize][k as usize], stirling1(n, k));
            }
        }
    }

    #[test]
    fn bell_examples() {
        assert_eq!(bell_y(1, 7), harmonic(7, 1));
        assert_eq!(bell_y(2, 2), q(7, 2));
        assert_eq!(bell_y(0, 5), 1);
    }

    #[test]
    fn mhs_examples() {
        assert_eq!(mhs(&MhsIndex::empty(), 10), 1);
        assert_eq!(mhs(&MhsIndex::plain(&[1, 1]), 2), q(1, 2));
        assert_eq!(mhs(&MhsIndex::plain(&[2, 1]), 3), q(5, 12));
        assert_eq!(mhs(&MhsIndex::plain(&[1, 1, 1]), 2), 0);
        // barred single part: sum (-1)^j / j
        assert_eq!(mhs(&MhsIndex::bar(1), 3), -alt_harmonic(3, 1));
    }

    #[test]
    fn symbolic_polys_match_numeric() {
        for k in 0..=5 {
            let p = bell_poly(k);
            for n in 1..=6 {
                assert_eq!(p.eval_at(n), bell_y(k, n));
            }
        }
        for k in 0..=4 {
            let p = ones_poly(k);
            for n in 0..=7 {
                assert_eq!(p.eval_at(n), mhs(&MhsIndex::ones(k), n));
            }
        }
    }
}
