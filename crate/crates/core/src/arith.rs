//! Characters, divisor sums and Bernoulli numbers.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The two Dirichlet characters that occur: the trivial character of
/// conductor 1 and the odd quadratic character `(-3/.)` of conductor 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DirichletCharacter {
    Trivial,
    Chi3,
}

impl DirichletCharacter {
    pub fn conductor(self) -> u64 {
        match self {
            Self::Trivial => 1,
            Self::Chi3 => 3,
        }
    }

    pub fn eval(self, n: i64) -> i8 {
        match self {
            Self::Trivial => 1,
            Self::Chi3 => chi3(n),
        }
    }

    /// `chi(-1)`: `1` for even characters, `-1` for odd ones.
    pub fn parity(self) -> i8 {
        self.eval(-1)
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Trivial => "1",
            Self::Chi3 => "chi3",
        })
    }
}

impl FromStr for DirichletCharacter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "1" | "trivial" => Ok(Self::Trivial),
            "chi3" | "chi-3" | "chi_-3" => Ok(Self::Chi3),
            other => Err(Error::UnknownForm(format!("character {other}"))),
        }
    }
}

/// The Kronecker symbol `(-3/n)`.
pub fn chi3(n: i64) -> i8 {
    match n.rem_euclid(3) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Positive divisors of `n` in increasing order, by trial division.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorization `[(p, e)]` by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn power(d: u64, r: u32) -> BigInt {
    Pow::pow(BigInt::from(d), r)
}

/// `sigma_r(n)`, the sum of the `r`-th powers of the divisors of `n`.
pub fn sigma(r: u32, n: u64) -> BigInt {
    divisors(n).into_iter().map(|d| power(d, r)).sum()
}

/// `sigma_r(n / m)` if `m | n`, else 0.
pub fn sigma_of_quotient(r: u32, n: u64, m: u64) -> BigInt {
    if n % m == 0 {
        sigma(r, n / m)
    } else {
        BigInt::zero()
    }
}

/// `sum_{d | n} psi(d) chi(n/d) d^(k-1)`.
pub fn sigma_twisted(
    k_minus_1: u32,
    chi: DirichletCharacter,
    psi: DirichletCharacter,
    n: u64,
) -> BigInt {
    divisors(n)
        .into_iter()
        .map(|d| {
            let w = i64::from(psi.eval(d as i64)) * i64::from(chi.eval((n / d) as i64));
            power(d, k_minus_1) * w
        })
        .sum()
}

/// `rho*_l(n)` exactly as printed alongside the odd-weight formulas:
/// `3^(l/2) sum_{d|n} ((n/d | 3) + (-1)^(l/2) (d | 3)) d^l`.
///
/// This is not the combination the Eisenstein part of the theta series
/// actually produces; see [`rho_star_eisenstein`].
pub fn rho_star(ell: u32, n: u64) -> BigInt {
    assert!(ell % 2 == 0, "rho* is defined for even l");
    let sign: i64 = if (ell / 2) % 2 == 0 { 1 } else { -1 };
    let inner: BigInt = divisors(n)
        .into_iter()
        .map(|d| {
            let w = i64::from(chi3((n / d) as i64)) + sign * i64::from(chi3(d as i64));
            power(d, ell) * w
        })
        .sum();
    power(3, ell / 2) * inner
}

/// `sum_{d|n} (3^(l/2) (n/d | 3) + (-1)^(l/2) (d | 3)) d^l`, the divisor sum
/// that the Eisenstein component of `F_(l+1)` carries (up to the same scalar
/// used with [`rho_star`]).
pub fn rho_star_eisenstein(ell: u32, n: u64) -> BigInt {
    assert!(ell % 2 == 0, "rho* is defined for even l");
    let sign: i64 = if (ell / 2) % 2 == 0 { 1 } else { -1 };
    let scale = power(3, ell / 2);
    divisors(n)
        .into_iter()
        .map(|d| {
            let a = &scale * i64::from(chi3((n / d) as i64));
            let b = BigInt::from(sign * i64::from(chi3(d as i64)));
            (a + b) * power(d, ell)
        })
        .sum()
}

/// `sigma*_l(n) = sigma_l(n) + (-3)^((l+1)/2) sigma_l(n/3)`, with the second
/// term absent when `3 ∤ n`.
pub fn sigma_star(ell: u32, n: u64) -> BigInt {
    assert!(ell % 2 == 1, "sigma* is defined for odd l");
    sigma(ell, n) + Pow::pow(BigInt::from(-3), (ell + 1) / 2) * sigma_of_quotient(ell, n, 3)
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Bernoulli numbers `B_0..=B_max` with `B_1 = -1/2`, from
/// `sum_{j=0}^{m} C(m+1, j) B_j = 0`.
fn bernoulli_table(max: u32) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=max {
        let s: BigRational = (0..m)
            .map(|j| &b[j as usize] * BigRational::from_integer(binomial(m + 1, j)))
            .sum();
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

pub fn bernoulli(k: u32) -> BigRational {
    bernoulli_table(k).swap_remove(k as usize)
}

/// `B_k(x) = sum_j C(k, j) B_j x^(k-j)`.
pub fn bernoulli_polynomial(k: u32, x: &BigRational) -> BigRational {
    let b = bernoulli_table(k);
    (0..=k)
        .map(|j| {
            BigRational::from_integer(binomial(k, j)) * &b[j as usize] * Pow::pow(x, k - j)
        })
        .sum()
}

/// `B_{k,psi} = f^(k-1) sum_{a=1}^{f} psi(a) B_k(a/f)` for `psi` of conductor `f`.
pub fn bernoulli_generalized(k: u32, psi: DirichletCharacter) -> BigRational {
    let f = psi.conductor();
    let mut acc = BigRational::zero();
    for a in 1..=f {
        let w = psi.eval(a as i64);
        if w == 0 {
            continue;
        }
        let x = BigRational::new(BigInt::from(a), BigInt::from(f));
        acc += bernoulli_polynomial(k, &x) * BigRational::from_integer(BigInt::from(w));
    }
    acc * BigRational::from_integer(power(f, k.saturating_sub(1)))
}

/// Memo of plain and generalized Bernoulli numbers. Built once, read-only
/// afterwards.
#[derive(Clone, Debug)]
pub struct BernoulliCache {
    plain: Vec<BigRational>,
    generalized: HashMap<(u32, DirichletCharacter), BigRational>,
}

impl BernoulliCache {
    pub fn new(max_k: u32) -> Self {
        let plain = bernoulli_table(max_k);
        let mut generalized = HashMap::new();
        for k in 1..=max_k {
            for psi in [DirichletCharacter::Trivial, DirichletCharacter::Chi3] {
                generalized.insert((k, psi), bernoulli_generalized(k, psi));
            }
        }
        Self { plain, generalized }
    }

    pub fn max_k(&self) -> u32 {
        (self.plain.len() - 1) as u32
    }

    pub fn plain(&self, k: u32) -> Option<&BigRational> {
        self.plain.get(k as usize)
    }

    pub fn generalized(&self, k: u32, psi: DirichletCharacter) -> Option<&BigRational> {
        self.generalized.get(&(k, psi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use DirichletCharacter::{Chi3, Trivial};

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn chi3_values() {
        assert_eq!(chi3(1), 1);
        assert_eq!(chi3(2), -1);
        assert_eq!(chi3(6), 0);
        assert_eq!(chi3(-1), -1);
        assert_eq!(Chi3.parity(), -1);
        assert_eq!(Trivial.parity(), 1);
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(1, 6), BigInt::from(12));
        assert_eq!(sigma(0, 12), BigInt::from(6));
        assert_eq!(sigma(11, 2), BigInt::from(2049));
    }

    #[test]
    fn divisors_and_factorization() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(factorize(1).is_empty());
    }

    #[test]
    fn sigma_twisted_values() {
        assert_eq!(sigma_twisted(6, Chi3, Trivial, 1), BigInt::from(1));
        assert_eq!(sigma_twisted(6, Trivial, Chi3, 2), BigInt::from(-63));
        assert_eq!(sigma_twisted(6, Chi3, Trivial, 3), BigInt::from(729));
    }

    #[test]
    fn rho_star_values() {
        assert_eq!(rho_star(6, 1), BigInt::zero());
        assert_eq!(rho_star(8, 1), BigInt::from(162));
        // 27 * ((chi(3) - chi(1)) * 1 + (chi(1) - chi(3)) * 729)
        assert_eq!(rho_star(6, 3), BigInt::from(27 * (729 - 1)));
        assert_eq!(rho_star_eisenstein(6, 1), BigInt::from(26));
        assert_eq!(rho_star_eisenstein(8, 1), BigInt::from(82));
        assert_eq!(rho_star_eisenstein(10, 1), BigInt::from(242));
    }

    #[test]
    fn sigma_star_values() {
        assert_eq!(sigma_star(11, 1), BigInt::from(1));
        assert_eq!(sigma_star(11, 3), BigInt::from(177_877));
        assert_eq!(sigma_star(13, 2), BigInt::from(8193));
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), r(1, 1));
        assert_eq!(bernoulli(1), r(-1, 2));
        assert_eq!(bernoulli(4), r(-1, 30));
        assert_eq!(bernoulli(12), r(-691, 2730));
        for k in (3..30).step_by(2) {
            assert!(bernoulli(k).is_zero(), "B_{k}");
        }
    }

    #[test]
    fn generalized_bernoulli_values() {
        assert_eq!(bernoulli_generalized(1, Chi3), r(-1, 3));
        assert_eq!(bernoulli_generalized(7, Chi3), r(98, 3));
        assert_eq!(bernoulli_generalized(9, Chi3), r(-1618, 3));
        assert_eq!(bernoulli_generalized(11, Chi3), r(40634, 3));
        for k in (2..24).step_by(2) {
            assert!(bernoulli_generalized(k, Chi3).is_zero(), "B_{{{k},chi}}");
        }
        for k in 2..20 {
            assert_eq!(bernoulli_generalized(k, Trivial), bernoulli(k));
        }
    }

    #[test]
    fn cache_agrees_with_direct() {
        let c = BernoulliCache::new(14);
        assert_eq!(c.max_k(), 14);
        assert_eq!(c.plain(12), Some(&bernoulli(12)));
        assert_eq!(c.generalized(7, Chi3), Some(&r(98, 3)));
        assert!(c.plain(15).is_none());
    }

    #[test]
    fn chi3_completely_multiplicative() {
        for m in 1..=500i64 {
            for n in 1..=500i64 {
                assert_eq!(chi3(m * n), chi3(m) * chi3(n));
            }
        }
    }
}
