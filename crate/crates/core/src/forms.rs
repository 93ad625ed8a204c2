//! q-expansions of the Eisenstein series, eta quotients, cusp forms and theta
//! series used by the identity checks.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{self, DirichletCharacter};
use crate::error::{Error, Result};
use crate::lattice;
use crate::series::QSeries;

/// `prod eta(m z)^e` over a list of `(m, e)` factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    factors: Vec<(u32, i32)>,
}

impl EtaQuotientSpec {
    /// Only quotients whose leading power `sum m e / 24` is a non-negative
    /// integer are admitted.
    pub fn new(factors: &[(u32, i32)]) -> Result<Self> {
        let spec = Self {
            factors: factors.to_vec(),
        };
        let total = spec.total_exponent();
        if total.rem_euclid(24) != 0 {
            return Err(Error::NonIntegralExponent { total });
        }
        if total < 0 {
            return Err(Error::NegativeOrder { total });
        }
        Ok(spec)
    }

    pub fn factors(&self) -> &[(u32, i32)] {
        &self.factors
    }

    /// `sum m * e`; the quotient starts at `q^(total / 24)`.
    pub fn total_exponent(&self) -> i64 {
        self.factors
            .iter()
            .map(|&(m, e)| i64::from(m) * i64::from(e))
            .sum()
    }

    pub fn leading_power(&self) -> usize {
        (self.total_exponent() / 24) as usize
    }
}

/// `prod_{n >= 1} (1 - q^n)` via the pentagonal number theorem.
pub fn euler_product(precision: usize) -> QSeries {
    let mut coeffs = vec![BigRational::zero(); precision + 1];
    coeffs[0] = BigRational::one();
    let p = precision as i64;
    let mut k: i64 = 1;
    loop {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let a = k * (3 * k - 1) / 2;
        let b = k * (3 * k + 1) / 2;
        if a > p {
            break;
        }
        coeffs[a as usize] = BigRational::from_integer(BigInt::from(sign));
        if b <= p {
            coeffs[b as usize] = BigRational::from_integer(BigInt::from(sign));
        }
        k += 1;
    }
    QSeries::from_coeffs(coeffs)
}

pub fn eta_quotient(spec: &EtaQuotientSpec, precision: usize) -> Result<QSeries> {
    let shift = spec.leading_power();
    if shift > precision {
        return Ok(QSeries::zero(precision));
    }
    let inner = precision - shift;
    let mut acc = QSeries::one(inner);
    for &(m, e) in spec.factors() {
        let base = euler_product(inner).scale_argument(m as usize);
        let factor = if e >= 0 {
            base.pow(e as u32)
        } else {
            base.invert()?.pow(e.unsigned_abs())
        };
        acc = acc.mul(&factor);
    }
    let mut coeffs = vec![BigRational::zero(); shift];
    coeffs.extend(acc.into_coeffs());
    Ok(QSeries::from_coeffs(coeffs))
}

/// `E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n` for even `k >= 2`
/// (`k = 2` gives the quasimodular `E_2`).
///
/// # Panics
/// If `k` is odd or less than 2.
pub fn eisenstein_classical(k: u32, precision: usize) -> QSeries {
    assert!(k >= 2 && k % 2 == 0, "E_k needs even k >= 2");
    let factor = -BigRational::from_integer(BigInt::from(2 * k)) / arith::bernoulli(k);
    QSeries::from_fn(precision, |n| {
        if n == 0 {
            BigRational::one()
        } else {
            &factor * BigRational::from_integer(arith::sigma(k - 1, n as u64))
        }
    })
}

/// `E_{k,chi,psi} = c0 + sum_{n>=1} sigma_{k-1;chi,psi}(n) q^n` with
/// `c0 = -B_{k,psi} / 2k` when `chi` is trivial and 0 otherwise.
pub fn eisenstein_twisted(
    k: u32,
    chi: DirichletCharacter,
    psi: DirichletCharacter,
    precision: usize,
) -> Result<QSeries> {
    if k <= 2 || (chi.conductor() == 1 && psi.conductor() == 1) {
        return Err(Error::InvalidEisenstein { k });
    }
    let sign = if k % 2 == 0 { 1 } else { -1 };
    if chi.parity() * psi.parity() != sign {
        return Err(Error::ParityMismatch { k });
    }
    let c0 = if chi.conductor() > 1 {
        BigRational::zero()
    } else {
        -arith::bernoulli_generalized(k, psi) / BigRational::from_integer(BigInt::from(2 * k))
    };
    Ok(QSeries::from_fn(precision, |n| {
        if n == 0 {
            c0.clone()
        } else {
            BigRational::from_integer(arith::sigma_twisted(k - 1, chi, psi, n as u64))
        }
    }))
}

/// `F_1^k = sum s_{2k}(n) q^n`.
pub fn theta_fk(k: u32, precision: usize) -> QSeries {
    let (f1, _) = lattice::enumerate_f1(precision);
    f1.pow(k)
}

/// `(3 E_2(3z) - E_2(z)) Delta(z) / 2`.
pub fn quasimodular_combination(precision: usize) -> QSeries {
    let e2 = eisenstein_classical(2, precision);
    let three = BigRational::from_integer(BigInt::from(3));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let factor = e2.scale_argument(3).scale(&three).sub(&e2).scale(&half);
    factor.mul(&delta(precision))
}

fn eta(factors: &[(u32, i32)], precision: usize) -> QSeries {
    let spec = EtaQuotientSpec::new(factors).expect("catalog eta quotients are integral");
    eta_quotient(&spec, precision).expect("catalog eta quotients have invertible factors")
}

pub fn delta(precision: usize) -> QSeries {
    eta(&[(1, 24)], precision)
}

/// `eta(z)^6 eta(3z)^6`.
pub fn delta_6_3(precision: usize) -> QSeries {
    eta(&[(1, 6), (3, 6)], precision)
}

/// `eta^12(z) eta^4(3z) + 81 eta^6(z) eta^4(3z) eta^6(9z) + 18 eta^9(z) eta^4(3z) eta^3(9z)`.
pub fn delta_8_3(precision: usize) -> QSeries {
    let c = |v: i64| BigRational::from_integer(BigInt::from(v));
    eta(&[(1, 12), (3, 4)], precision)
        .add(&eta(&[(1, 6), (3, 4), (9, 6)], precision).scale(&c(81)))
        .add(&eta(&[(1, 9), (3, 4), (9, 3)], precision).scale(&c(18)))
}

/// The normalized weight-7 newform of level 3 with character `chi_-3`.
///
/// `(E_4(z) - E_4(3z)) eta^9(z) / eta^3(3z)` starts at `240 q`; dividing by
/// the `q^1` coefficient of `E_4(z) - E_4(3z)` normalizes it.
pub fn delta_7_3_chi(precision: usize) -> Result<QSeries> {
    let e4 = eisenstein_classical(4, precision);
    let diff = e4.sub(&e4.scale_argument(3));
    let raw = diff.mul(&eta(&[(1, 9), (3, -3)], precision));
    let lead = diff.coefficient(1).cloned().unwrap_or_else(|_| BigRational::one());
    let series = raw.scale(&lead.recip());
    ensure_normalized("Delta_7_3_chi3", &series)?;
    Ok(series)
}

/// `eta^3(z) eta^15(3z)`.
pub fn delta_9_3_chi_1(precision: usize) -> QSeries {
    eta(&[(1, 3), (3, 15)], precision)
}

/// `eta^15(z) eta^3(3z)`.
pub fn delta_9_3_chi_2(precision: usize) -> QSeries {
    eta(&[(1, 15), (3, 3)], precision)
}

/// `E_4(z) Delta_{7,3,chi}(z)`.
pub fn delta_11_3_chi_1(precision: usize) -> Result<QSeries> {
    Ok(eisenstein_classical(4, precision).mul(&delta_7_3_chi(precision)?))
}

/// `E_4(3z) Delta_{7,3,chi}(z)`.
pub fn delta_11_3_chi_2(precision: usize) -> Result<QSeries> {
    Ok(eisenstein_classical(4, precision)
        .scale_argument(3)
        .mul(&delta_7_3_chi(precision)?))
}

fn ensure_normalized(name: &str, s: &QSeries) -> Result<()> {
    let c0 = s.coefficient(0)?;
    let lead = match s.coefficient(1) {
        Ok(c) => c,
        Err(_) => return Ok(()),
    };
    if !c0.is_zero() || !lead.is_one() {
        return Err(Error::NotNormalized {
            name: name.to_string(),
            leading: lead.to_string(),
        });
    }
    Ok(())
}

/// Every form that can be built by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormName {
    /// Classical `E_k` for even `k >= 2`.
    Eisenstein(u32),
    EisensteinTwisted {
        k: u32,
        chi: DirichletCharacter,
        psi: DirichletCharacter,
    },
    Delta,
    Delta6_3,
    Delta8_3,
    Delta7_3Chi,
    Delta9_3Chi1,
    Delta9_3Chi2,
    Delta11_3Chi1,
    Delta11_3Chi2,
    /// `F_1^k`.
    Theta(u32),
    /// `(3 E_2(3z) - E_2(z)) Delta(z) / 2`.
    Quasimodular,
}

impl FormName {
    pub const CUSP_FORMS: [FormName; 8] = [
        Self::Delta,
        Self::Delta6_3,
        Self::Delta8_3,
        Self::Delta7_3Chi,
        Self::Delta9_3Chi1,
        Self::Delta9_3Chi2,
        Self::Delta11_3Chi1,
        Self::Delta11_3Chi2,
    ];

    /// Normalized newforms: cusp forms with `q^1` coefficient 1 whose
    /// coefficients are multiplicative.
    pub const NEWFORMS: [FormName; 4] = [
        Self::Delta,
        Self::Delta6_3,
        Self::Delta8_3,
        Self::Delta7_3Chi,
    ];

    pub fn weight(self) -> u32 {
        match self {
            Self::Eisenstein(k) | Self::EisensteinTwisted { k, .. } => k,
            Self::Delta => 12,
            Self::Delta6_3 => 6,
            Self::Delta8_3 => 8,
            Self::Delta7_3Chi => 7,
            Self::Delta9_3Chi1 | Self::Delta9_3Chi2 => 9,
            Self::Delta11_3Chi1 | Self::Delta11_3Chi2 => 11,
            Self::Theta(k) => k,
            Self::Quasimodular => 14,
        }
    }

    pub fn level(self) -> u32 {
        match self {
            Self::Eisenstein(_) | Self::Delta => 1,
            Self::EisensteinTwisted { chi, psi, .. } => (chi.conductor() * psi.conductor()) as u32,
            _ => 3,
        }
    }

    pub fn character(self) -> DirichletCharacter {
        use DirichletCharacter::*;
        match self {
            Self::EisensteinTwisted { chi, psi, .. } if chi != psi => Chi3,
            Self::Delta7_3Chi
            | Self::Delta9_3Chi1
            | Self::Delta9_3Chi2
            | Self::Delta11_3Chi1
            | Self::Delta11_3Chi2 => Chi3,
            Self::Theta(k) if k % 2 == 1 => Chi3,
            _ => Trivial,
        }
    }

    pub fn is_cusp_form(self) -> bool {
        Self::CUSP_FORMS.contains(&self) || self == Self::Quasimodular
    }
}

impl fmt::Display for FormName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Eisenstein(k) => write!(f, "E{k}"),
            Self::EisensteinTwisted { k, chi, psi } => write!(f, "E_{k}_{chi}_{psi}"),
            Self::Delta => f.write_str("Delta"),
            Self::Delta6_3 => f.write_str("Delta_6_3"),
            Self::Delta8_3 => f.write_str("Delta_8_3"),
            Self::Delta7_3Chi => f.write_str("Delta_7_3_chi3"),
            Self::Delta9_3Chi1 => f.write_str("Delta_9_3_chi3_1"),
            Self::Delta9_3Chi2 => f.write_str("Delta_9_3_chi3_2"),
            Self::Delta11_3Chi1 => f.write_str("Delta_11_3_chi3_1"),
            Self::Delta11_3Chi2 => f.write_str("Delta_11_3_chi3_2"),
            Self::Theta(k) => write!(f, "F{k}"),
            Self::Quasimodular => f.write_str("E2_Delta"),
        }
    }
}

impl FromStr for FormName {
    type Err = Error;

    /// Accepts the names produced by `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownForm(s.to_string());
        let fixed = [
            Self::Delta,
            Self::Delta6_3,
            Self::Delta8_3,
            Self::Delta7_3Chi,
            Self::Delta9_3Chi1,
            Self::Delta9_3Chi2,
            Self::Delta11_3Chi1,
            Self::Delta11_3Chi2,
            Self::Quasimodular,
        ];
        if let Some(f) = fixed.into_iter().find(|f| f.to_string() == s) {
            return Ok(f);
        }
        if let Some(rest) = s.strip_prefix("E_") {
            let parts: Vec<&str> = rest.split('_').collect();
            if let [k, chi, psi] = parts.as_slice() {
                return Ok(Self::EisensteinTwisted {
                    k: k.parse().map_err(|_| unknown())?,
                    chi: chi.parse().map_err(|_| unknown())?,
                    psi: psi.parse().map_err(|_| unknown())?,
                });
            }
            return Err(unknown());
        }
        if let Some(k) = s.strip_prefix('E') {
            let k: u32 = k.parse().map_err(|_| unknown())?;
            if k >= 2 && k % 2 == 0 {
                return Ok(Self::Eisenstein(k));
            }
            return Err(unknown());
        }
        if let Some(k) = s.strip_prefix('F') {
            let k: u32 = k.parse().map_err(|_| unknown())?;
            if k >= 1 {
                return Ok(Self::Theta(k));
            }
        }
        Err(unknown())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedForm {
    pub name: FormName,
    pub weight: u32,
    pub level: u32,
    pub character: DirichletCharacter,
    pub series: QSeries,
}

pub fn named_form(name: FormName, precision: usize) -> Result<NamedForm> {
    let series = match name {
        FormName::Eisenstein(k) => {
            if k < 2 || k % 2 == 1 {
                return Err(Error::UnknownForm(name.to_string()));
            }
            eisenstein_classical(k, precision)
        }
        FormName::EisensteinTwisted { k, chi, psi } => eisenstein_twisted(k, chi, psi, precision)?,
        FormName::Delta => delta(precision),
        FormName::Delta6_3 => delta_6_3(precision),
        FormName::Delta8_3 => delta_8_3(precision),
        FormName::Delta7_3Chi => delta_7_3_chi(precision)?,
        FormName::Delta9_3Chi1 => delta_9_3_chi_1(precision),
        FormName::Delta9_3Chi2 => delta_9_3_chi_2(precision),
        FormName::Delta11_3Chi1 => delta_11_3_chi_1(precision)?,
        FormName::Delta11_3Chi2 => delta_11_3_chi_2(precision)?,
        FormName::Theta(k) => theta_fk(k, precision),
        FormName::Quasimodular => quasimodular_combination(precision),
    };
    if FormName::NEWFORMS.contains(&name) {
        ensure_normalized(&name.to_string(), &series)?;
    }
    Ok(NamedForm {
        name,
        weight: name.weight(),
        level: name.level(),
        character: name.character(),
        series,
    })
}
