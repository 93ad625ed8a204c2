//! Truncated formal power series in `q` with exact rational coefficients.
//!
//! A [`QSeries`] of precision `N` stores the coefficients of `q^0..=q^N` and
//! represents a series known modulo `q^(N+1)`. Binary operations truncate to
//! the smaller of the two precisions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<BigRational>,
}

impl QSeries {
    pub fn zero(precision: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); precision + 1],
        }
    }

    pub fn one(precision: usize) -> Self {
        Self::constant(BigRational::one(), precision)
    }

    pub fn constant(c: BigRational, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        s.coeffs[0] = c;
        s
    }

    /// `c * q^e`, or zero if `e` lies beyond the precision.
    pub fn monomial(c: BigRational, e: usize, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if e <= precision {
            s.coeffs[e] = c;
        }
        s
    }

    /// Builds a series from `coeffs[0..]`; the precision is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the q^0 coefficient");
        Self { coeffs }
    }

    pub fn from_integers<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::from_coeffs(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    /// Builds a series of the given precision from a coefficient function.
    pub fn from_fn(precision: usize, f: impl FnMut(usize) -> BigRational) -> Self {
        Self::from_coeffs((0..=precision).map(f).collect())
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    pub fn coefficient(&self, n: usize) -> Result<&BigRational> {
        self.coeffs.get(n).ok_or(Error::OutOfPrecision {
            n,
            precision: self.precision(),
        })
    }

    /// Coefficient of `q^n`, panicking past the precision. For internal use
    /// where the index has already been range-checked.
    pub(crate) fn at(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let p = precision.min(self.precision());
        Self::from_coeffs(self.coeffs[..=p].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.precision().min(other.precision());
        Self::from_fn(p, |i| &self.coeffs[i] + &other.coeffs[i])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.precision().min(other.precision());
        Self::from_fn(p, |i| &self.coeffs[i] - &other.coeffs[i])
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Cauchy product truncated at the smaller precision.
    ///
    /// Both operands are brought to a common denominator first, so the inner
    /// loop runs over integers; the result is identical to the schoolbook
    /// product over the rationals.
    pub fn mul(&self, other: &Self) -> Self {
        let p = self.precision().min(other.precision());
        let (a, da) = integral_parts(&self.coeffs[..=p]);
        let (b, db) = integral_parts(&other.coeffs[..=p]);
        let den = da * db;
        let mut out = Vec::with_capacity(p + 1);
        for n in 0..=p {
            let mut acc = BigInt::zero();
            for i in 0..=n {
                if a[i].is_zero() || b[n - i].is_zero() {
                    continue;
                }
                acc += &a[i] * &b[n - i];
            }
            out.push(BigRational::new(acc, den.clone()));
        }
        Self::from_coeffs(out)
    }

    /// `self^e` by binary powering. `pow(0)` is the constant series 1.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut result = Self::one(self.precision());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse modulo `q^(N+1)`.
    pub fn invert(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv_a0 = a0.recip();
        let mut b: Vec<BigRational> = Vec::with_capacity(self.coeffs.len());
        b.push(inv_a0.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = BigRational::zero();
            for i in 1..=n {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &b[n - i];
                }
            }
            b.push(-(acc * &inv_a0));
        }
        Ok(Self::from_coeffs(b))
    }

    /// The substitution `q -> q^m`, i.e. `f(z) -> f(mz)`, keeping the precision.
    ///
    /// # Panics
    /// If `m == 0`.
    pub fn scale_argument(&self, m: usize) -> Self {
        assert!(m >= 1, "argument scale must be positive");
        let p = self.precision();
        Self::from_fn(p, |i| {
            if i % m == 0 {
                self.coeffs[i / m].clone()
            } else {
                BigRational::zero()
            }
        })
    }
}

/// Splits a rational slice into integer numerators over a common denominator.
fn integral_parts(coeffs: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    (nums, den)
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "q^{i}")?,
                _ => write!(f, "{mag}*q^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.precision() + 1)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&QSeries> for &QSeries {
            type Output = QSeries;
            fn $method(self, rhs: &QSeries) -> QSeries {
                QSeries::$method(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::neg(self)
    }
}
