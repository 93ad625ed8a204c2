//! Closed-form representation-number formulas and identity checks.
//!
//! Every check compares two exact rationals per `n` and records the indices
//! where they differ. Identities whose printed form is known to be off (the
//! theorem-level `rho*` statements and the printed `s_28` corollary) are
//! tagged [`Expectation::Documented`]; they are reported but do not count as
//! failures unless verification runs in strict mode.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, DirichletCharacter};
use crate::error::{Error, Result};
use crate::forms;
use crate::lattice::{LatticeTables, LomadzeSum};
use crate::series::QSeries;

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Whether a convolution index starts at 1 or at 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SumRange {
    /// `a, b >= 1`.
    Positive,
    /// `a, b >= 0`, with the boundary values of [`ConvolutionConvention`].
    NonNegative,
}

impl fmt::Display for SumRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Positive => "a,b>=1",
            Self::NonNegative => "a,b>=0",
        })
    }
}

/// Boundary values for sums over `a + b = n` with `a, b >= 0`:
/// `sigma_3(0) = 1/240`, `sigma_5(0) = -1/504`, `sigma_7(0) = 1/480`, and
/// every cusp form vanishes at 0. `sigma_1(0) = -1/24` is only used by the
/// fallback evaluation of the `E_2(3z) Delta(z)` identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvolutionConvention {
    pub range: SumRange,
}

impl ConvolutionConvention {
    pub const POSITIVE: Self = Self {
        range: SumRange::Positive,
    };
    pub const NON_NEGATIVE: Self = Self {
        range: SumRange::NonNegative,
    };

    pub fn sigma_at_zero(r: u32) -> BigRational {
        match r {
            1 => frac(-1, 24),
            3 => frac(1, 240),
            5 => frac(-1, 504),
            7 => frac(1, 480),
            _ => panic!("no boundary value for sigma_{r}(0)"),
        }
    }

    fn lower(self) -> usize {
        match self.range {
            SumRange::Positive => 1,
            SumRange::NonNegative => 0,
        }
    }
}

/// Whether an identity is expected to hold as printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Exact,
    /// The printed statement is known to disagree with brute force; the
    /// mismatch is reported but tolerated outside strict mode.
    Documented,
}

/// Which `rho*` enters the odd-weight formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhoVariant {
    /// As printed: `3^(l/2)` multiplies both character terms.
    Printed,
    /// As forced by the Eisenstein part of the theta series.
    Eisenstein,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    DecompositionF7,
    DecompositionF9,
    DecompositionF11,
    DecompositionF12,
    DecompositionF14,
    S14Theorem,
    S18Theorem,
    S22Theorem,
    S24Theorem,
    S28Theorem,
    LomadzeS24,
    LomadzeS28,
    TauEq,
    Tau6_3,
    Tau8_3,
    Tau7Chi,
    Tau9Chi,
    Tau11Chi,
    Tau10_3_2,
    RamanujanConvolution,
    E2DeltaConvolution,
    S28Comparison,
    S28Intermediate,
    S28CorPrinted,
    S28CorDerived,
}

impl Identity {
    pub const ALL: [Identity; 25] = [
        Self::DecompositionF7,
        Self::DecompositionF9,
        Self::DecompositionF11,
        Self::DecompositionF12,
        Self::DecompositionF14,
        Self::S14Theorem,
        Self::S18Theorem,
        Self::S22Theorem,
        Self::S24Theorem,
        Self::S28Theorem,
        Self::LomadzeS24,
        Self::LomadzeS28,
        Self::TauEq,
        Self::Tau6_3,
        Self::Tau8_3,
        Self::Tau7Chi,
        Self::Tau9Chi,
        Self::Tau11Chi,
        Self::Tau10_3_2,
        Self::RamanujanConvolution,
        Self::E2DeltaConvolution,
        Self::S28Comparison,
        Self::S28Intermediate,
        Self::S28CorPrinted,
        Self::S28CorDerived,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::DecompositionF7 => "decomposition-F7",
            Self::DecompositionF9 => "decomposition-F9",
            Self::DecompositionF11 => "decomposition-F11",
            Self::DecompositionF12 => "decomposition-F12",
            Self::DecompositionF14 => "decomposition-F14",
            Self::S14Theorem => "s14-theorem",
            Self::S18Theorem => "s18-theorem",
            Self::S22Theorem => "s22-theorem",
            Self::S24Theorem => "s24-theorem",
            Self::S28Theorem => "s28-theorem",
            Self::LomadzeS24 => "lomadze-s24",
            Self::LomadzeS28 => "lomadze-s28",
            Self::TauEq => "tau-eq",
            Self::Tau6_3 => "tau-6-3",
            Self::Tau8_3 => "tau-8-3",
            Self::Tau7Chi => "tau-7-chi3",
            Self::Tau9Chi => "tau-9-chi3",
            Self::Tau11Chi => "tau-11-chi3",
            Self::Tau10_3_2 => "tau-10-3-2",
            Self::RamanujanConvolution => "tau1",
            Self::E2DeltaConvolution => "tau2",
            Self::S28Comparison => "s28-comparison",
            Self::S28Intermediate => "s28-intermediate",
            Self::S28CorPrinted => "s28-cor",
            Self::S28CorDerived => "s28-cor-derived",
        }
    }

    pub fn expectation(self) -> Expectation {
        match self {
            Self::S14Theorem | Self::S18Theorem | Self::S22Theorem | Self::S28CorPrinted => {
                Expectation::Documented
            }
            _ => Expectation::Exact,
        }
    }

    fn note(self) -> Option<&'static str> {
        match self {
            Self::S14Theorem | Self::S18Theorem | Self::S22Theorem => Some(
                "uses rho* as printed (3^(l/2) on both character terms); \
                 the decomposition report and rho-table give the consistent form",
            ),
            Self::S28CorPrinted => Some(
                "printed coefficient +461/3 on L_6_2; the proof chain gives -461/3 \
                 (see s28-cor-derived)",
            ),
            Self::S28Intermediate => Some(
                "coefficient of the sigma_5 * tau_8_3 convolution is -6999552, \
                 as the substitution of tau1 and tau2 gives",
            ),
            Self::Tau10_3_2 => Some(
                "tau_10_3_2 := L_10_6 / 120; checks q^1 normalization and \
                 multiplicativity over prime powers",
            ),
            _ => None,
        }
    }

    fn decomposition_k(self) -> Option<u32> {
        match self {
            Self::DecompositionF7 => Some(7),
            Self::DecompositionF9 => Some(9),
            Self::DecompositionF11 => Some(11),
            Self::DecompositionF12 => Some(12),
            Self::DecompositionF14 => Some(14),
            _ => None,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

/// Serializes a rational as `"p/q"`, or `"p"` for integers.
pub mod rational_string {
    use std::str::FromStr;

    use num_rational::BigRational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        BigRational::from_str(&s).map_err(de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub n: usize,
    #[serde(with = "rational_string")]
    pub lhs: BigRational,
    #[serde(with = "rational_string")]
    pub rhs: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantTermCheck {
    #[serde(with = "rational_string")]
    pub lhs: BigRational,
    #[serde(with = "rational_string")]
    pub rhs: BigRational,
    pub matches: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportStatus {
    Match,
    Mismatch,
    /// Mismatches in an identity tagged [`Expectation::Documented`].
    Documented,
}

impl fmt::Display for ReportStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Match => "match",
            Self::Mismatch => "mismatch",
            Self::Documented => "documented",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub n_min: usize,
    pub n_max: usize,
    pub status: ReportStatus,
    pub mismatches: Vec<Mismatch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<SumRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant_term: Option<ConstantTermCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Per-`n` outcome, as yielded by [`IdentityReport::entries`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry<'a> {
    Match(usize),
    Mismatch(&'a Mismatch),
}

impl IdentityReport {
    pub fn all_match(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn first_mismatch(&self) -> Option<&Mismatch> {
        self.mismatches.first()
    }

    /// One entry per `n` in `n_min..=n_max`.
    pub fn entries(&self) -> impl Iterator<Item = Entry<'_>> + '_ {
        let mut mm = self.mismatches.iter().peekable();
        (self.n_min..=self.n_max).map(move |n| match mm.peek() {
            Some(m) if m.n == n => Entry::Mismatch(mm.next().unwrap()),
            _ => Entry::Match(n),
        })
    }

    /// Whether this report fails verification under the given policy.
    pub fn fails(&self, strict: bool) -> bool {
        match self.status {
            ReportStatus::Match => false,
            ReportStatus::Mismatch => true,
            ReportStatus::Documented => strict,
        }
    }
}

/// One row of the `rho*` discrepancy table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoStarRow {
    pub ell: u32,
    pub n: usize,
    /// `rho*_l(n)` as printed.
    #[serde(with = "rational_string")]
    pub printed: BigRational,
    /// The value the odd-weight formula needs for it to reproduce `s_{2(l+1)}(n)`.
    #[serde(with = "rational_string")]
    pub implied: BigRational,
    #[serde(with = "rational_string")]
    pub difference: BigRational,
    /// Whether `implied` equals [`arith::rho_star_eisenstein`].
    pub eisenstein_closed_form: bool,
}

/// Tables and series shared by every identity, built once per precision.
pub struct Context {
    precision: usize,
    tables: LatticeTables,
    lsums: Vec<Vec<BigRational>>,
    sigma: Vec<Vec<BigRational>>,
    delta: QSeries,
    d6_3: QSeries,
    d8_3: QSeries,
    d7: QSeries,
    d9_1: QSeries,
    d9_2: QSeries,
    d11_1: QSeries,
    d11_2: QSeries,
    theta: [OnceLock<QSeries>; 15],
    decomposition: [OnceLock<QSeries>; 15],
}

const SIGMA_MAX: u32 = 13;

impl Context {
    pub fn new(precision: usize) -> Result<Self> {
        let tables = LatticeTables::new(precision);
        let lsums = LomadzeSum::ALL
            .iter()
            .map(|l| {
                tables
                    .lomadze_values(&l.spec())
                    .map(|v| v.into_iter().map(int).collect())
            })
            .collect::<Result<Vec<Vec<_>>>>()?;
        let sigma = (0..=SIGMA_MAX)
            .map(|r| {
                (0..=precision)
                    .map(|n| {
                        if n == 0 {
                            BigRational::zero()
                        } else {
                            int(arith::sigma(r, n as u64))
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            precision,
            tables,
            lsums,
            sigma,
            delta: forms::delta(precision),
            d6_3: forms::delta_6_3(precision),
            d8_3: forms::delta_8_3(precision),
            d7: forms::delta_7_3_chi(precision)?,
            d9_1: forms::delta_9_3_chi_1(precision),
            d9_2: forms::delta_9_3_chi_2(precision),
            d11_1: forms::delta_11_3_chi_1(precision)?,
            d11_2: forms::delta_11_3_chi_2(precision)?,
            theta: Default::default(),
            decomposition: Default::default(),
        })
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn tables(&self) -> &LatticeTables {
        &self.tables
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.precision {
            Err(Error::PrecisionTooLow {
                requested: n,
                available: self.precision,
            })
        } else {
            Ok(())
        }
    }

    fn l(&self, sum: LomadzeSum, n: usize) -> &BigRational {
        let idx = LomadzeSum::ALL.iter().position(|&s| s == sum).unwrap();
        &self.lsums[idx][n]
    }

    pub fn lomadze(&self, sum: LomadzeSum, n: usize) -> Result<BigInt> {
        self.check(n)?;
        Ok(self.l(sum, n).to_integer())
    }

    fn sigma(&self, r: u32, n: usize) -> &BigRational {
        &self.sigma[r as usize][n]
    }

    /// `sigma_r(a)` with the boundary value at `a = 0`.
    fn sigma0(&self, r: u32, a: usize) -> BigRational {
        if a == 0 {
            ConvolutionConvention::sigma_at_zero(r)
        } else {
            self.sigma(r, a).clone()
        }
    }

    /// `sum_{a + b = n} sigma_r(a) g(b)` under `conv`.
    fn sigma_conv(
        &self,
        r: u32,
        g: impl Fn(usize) -> BigRational,
        n: usize,
        conv: ConvolutionConvention,
    ) -> BigRational {
        let lo = conv.lower();
        if n < 2 * lo {
            return BigRational::zero();
        }
        (lo..=n - lo).map(|a| self.sigma0(r, a) * g(n - a)).sum()
    }

    /// `sum_{3a + b = n, a, b >= lo} sigma(a) tau(b)`.
    fn sigma_tau_3(&self, n: usize, conv: ConvolutionConvention) -> BigRational {
        let lo = conv.lower();
        (lo..)
            .take_while(|a| 3 * a + lo <= n)
            .map(|a| self.sigma0(1, a) * self.delta.at(n - 3 * a))
            .sum()
    }

    pub fn delta(&self) -> &QSeries {
        &self.delta
    }

    pub fn tau(&self, n: usize) -> Result<BigInt> {
        Ok(self.delta.coefficient(n)?.to_integer())
    }

    /// `s_{2k}(n)` from the block-convolution tables.
    pub fn s2k_bruteforce(&self, k: u32, n: usize) -> Result<BigInt> {
        self.check(n)?;
        Ok(self.tables.counts(k as usize)?[n].clone())
    }

    /// `F_1^k` by series powering.
    pub fn theta(&self, k: u32) -> Result<&QSeries> {
        let slot = self.theta.get(k as usize).ok_or(Error::UnsupportedK {
            k,
            valid: (1..=14).collect(),
        })?;
        Ok(slot.get_or_init(|| self.tables.f1().pow(k)))
    }

    /// The basis decomposition of `F_k` for `k` in `{7, 9, 11, 12, 14}`.
    pub fn decomposition(&self, k: u32) -> Result<&QSeries> {
        if !DECOMPOSITION_K.contains(&k) {
            return Err(Error::UnsupportedK {
                k,
                valid: DECOMPOSITION_K.to_vec(),
            });
        }
        Ok(self.decomposition[k as usize].get_or_init(|| self.build_decomposition(k)))
    }

    fn build_decomposition(&self, k: u32) -> QSeries {
        use DirichletCharacter::{Chi3, Trivial};
        let p = self.precision;
        let twisted = |chi, psi| {
            forms::eisenstein_twisted(k, chi, psi, p).expect("odd k with one odd character")
        };
        let e = |w| forms::eisenstein_classical(w, p);
        let terms: Vec<(BigRational, QSeries)> = match k {
            // The larger Eisenstein weight sits on E_{k,chi,1}, whose divisor
            // sum twists n/d; E_{k,1,chi} supplies the constant term.
            7 => vec![
                (frac(81, 7), twisted(Chi3, Trivial)),
                (frac(-3, 7), twisted(Trivial, Chi3)),
                (frac(216, 7), self.d7.clone()),
            ],
            9 => vec![
                (frac(2187, 809), twisted(Chi3, Trivial)),
                (frac(27, 809), twisted(Trivial, Chi3)),
                (frac(1_119_744, 809), self.d9_1.clone()),
                (frac(41_472, 809), self.d9_2.clone()),
            ],
            11 => vec![
                (frac(729, 1847), twisted(Chi3, Trivial)),
                (frac(-3, 1847), twisted(Trivial, Chi3)),
                (frac(60_588, 9235), self.d11_1.clone()),
                (frac(545_292, 9235), self.d11_2.clone()),
            ],
            12 => vec![
                (frac(1, 730), e(12)),
                (frac(729, 730), e(12).scale_argument(3)),
                (frac(29_824, 691), self.delta.clone()),
                (frac(1_186_848, 50_443), e(4).mul(&self.d8_3)),
                (frac(261_344, 50_443), e(6).mul(&self.d6_3)),
            ],
            14 => vec![
                (frac(-1, 2186), e(14)),
                (frac(2187, 2186), e(14).scale_argument(3)),
                (frac(-3016, 1093), e(8).mul(&self.d6_3)),
                (frac(-12_448, 1093), e(6).mul(&self.d8_3)),
                // 53632/1093 (3 E_2(3z) - E_2(z)) Delta
                (frac(107_264, 1093), forms::quasimodular_combination(p)),
            ],
            _ => unreachable!(),
        };
        terms
            .iter()
            .fold(QSeries::zero(p), |acc, (c, s)| acc.add(&s.scale(c)))
    }

    pub fn s2k_decomposition(&self, k: u32, n: usize) -> Result<BigRational> {
        self.check(n)?;
        Ok(self.decomposition(k)?.at(n).clone())
    }

    /// `rho*_l(n)` under the chosen variant.
    pub fn rho_star(&self, ell: u32, n: usize, variant: RhoVariant) -> BigRational {
        int(match variant {
            RhoVariant::Printed => arith::rho_star(ell, n as u64),
            RhoVariant::Eisenstein => arith::rho_star_eisenstein(ell, n as u64),
        })
    }

    /// Cusp part and Eisenstein scalar of the odd-weight formulas:
    /// `s_{2k}(n) = scalar * rho*_{k-1}(n) + cusp(n)`.
    fn odd_weight_parts(&self, k: u32, n: usize) -> (BigRational, BigRational) {
        match k {
            7 => (frac(3, 7), frac(216, 7) * self.d7.at(n)),
            9 => (
                frac(27, 809),
                frac(24 * 1728, 809) * (int(27) * self.d9_1.at(n) + self.d9_2.at(n)),
            ),
            11 => (
                frac(3, 1847),
                frac(81 * 748, 9235) * (self.d11_1.at(n) + int(9) * self.d11_2.at(n)),
            ),
            _ => unreachable!(),
        }
    }

    /// Theorem-level closed forms for `s_{2k}(n)`, `k` in `{7, 9, 11, 12, 14}`.
    /// `variant` only affects the odd weights.
    pub fn s2k_formula(&self, k: u32, n: usize, variant: RhoVariant) -> Result<BigRational> {
        self.check(n)?;
        if n == 0 {
            return Ok(BigRational::one());
        }
        match k {
            7 | 9 | 11 => {
                let (scalar, cusp) = self.odd_weight_parts(k, n);
                Ok(scalar * self.rho_star(k - 1, n, variant) + cusp)
            }
            12 => Ok(self.s24_formula(n)),
            14 => Ok(self.s28_formula(n)),
            _ => Err(Error::UnsupportedK {
                k,
                valid: DECOMPOSITION_K.to_vec(),
            }),
        }
    }

    fn s24_formula(&self, n: usize) -> BigRational {
        let c = ConvolutionConvention::NON_NEGATIVE;
        frac(6552, 73 * 691) * int(arith::sigma_star(11, n as u64))
            + frac(29_824, 691) * self.delta.at(n)
            + frac(240 * 1_186_848, 50_443) * self.sigma_conv(3, |b| self.d8_3.at(b).clone(), n, c)
            - frac(504 * 261_344, 50_443) * self.sigma_conv(5, |b| self.d6_3.at(b).clone(), n, c)
    }

    fn s28_formula(&self, n: usize) -> BigRational {
        let pos = ConvolutionConvention::POSITIVE;
        let nonneg = ConvolutionConvention::NON_NEGATIVE;
        let tau = |b: usize| self.delta.at(b).clone();
        frac(12, 1093) * int(arith::sigma_star(13, n as u64))
            + frac(107_264, 1093) * self.delta.at(n)
            + frac(107_264 * 12, 1093)
                * (self.sigma_conv(1, tau, n, pos) - int(3) * self.sigma_tau_3(n, pos))
            + frac(12_448 * 504, 1093) * self.sigma_conv(5, |b| self.d8_3.at(b).clone(), n, nonneg)
            - frac(3016 * 480, 1093) * self.sigma_conv(7, |b| self.d6_3.at(b).clone(), n, nonneg)
    }

    pub fn lomadze_s24(&self, n: usize) -> Result<BigRational> {
        self.check(n)?;
        Ok(frac(1, 73 * 691)
            * (int(6552 * arith::sigma_star(11, n as u64))
                + frac(291_096, 35) * self.l(LomadzeSum::L12_8, n)
                + int(864) * self.l(LomadzeSum::L12_6, n)
                + int(360) * self.l(LomadzeSum::L12_4, n)))
    }

    pub fn lomadze_s28(&self, n: usize) -> Result<BigRational> {
        self.check(n)?;
        Ok(frac(12, 1093) * int(arith::sigma_star(13, n as u64))
            + frac(188_954, 803_355) * self.l(LomadzeSum::L14_10, n)
            + frac(1728, 267_785) * self.l(LomadzeSum::L14_8, n)
            + frac(288, 191_275) * self.l(LomadzeSum::L14_6, n))
    }

    /// `tau(n)` from lattice sums over `F_2`, `F_4`, `F_6`, `F_8` and two
    /// divisor convolutions.
    pub fn tau_via_lattice_sums(&self, n: usize) -> Result<BigRational> {
        self.check(n)?;
        use LomadzeSum::*;
        let pos = ConvolutionConvention::POSITIVE;
        let bracket = frac(36_387, 35) * self.l(L12_8, n)
            + int(108) * self.l(L12_6, n)
            + frac(1, 3) * self.l(Lcal4, n)
            - frac(32_668, 12) * self.l(L6_2, n)
            - int(329_680) * self.sigma_conv(3, |b| self.l(L8_4, b).clone(), n, pos)
            + int(1_372_056) * self.sigma_conv(5, |b| self.l(L6_2, b).clone(), n, pos);
        Ok(bracket / int(73 * 3728))
    }

    fn tau10(&self, n: usize) -> BigRational {
        self.l(LomadzeSum::L10_6, n) / int(120)
    }

    /// Both sides of the `E_2(3z) Delta(z)` convolution identity.
    fn e2_delta_sides(&self, n: usize, conv: ConvolutionConvention) -> (BigRational, BigRational) {
        let lhs = self.sigma_tau_3(n, conv);
        let rhs = frac(3 - n as i64, 72) * self.delta.at(n)
            - frac(1, 576) * self.d6_3.at(n)
            - frac(1, 96) * self.d8_3.at(n)
            - frac(1, 64) * self.tau10(n)
            - frac(5, 6) * self.sigma_conv(7, |b| self.d6_3.at(b).clone(), n, conv)
            + frac(21, 4) * self.sigma_conv(5, |b| self.d8_3.at(b).clone(), n, conv)
            - frac(15, 4) * self.sigma_conv(3, |b| self.tau10(b), n, conv);
        (lhs, rhs)
    }

    /// Convolution side of the `s_28` corollary.
    fn s28_cor_lhs(&self, n: usize) -> BigRational {
        use LomadzeSum::*;
        let pos = ConvolutionConvention::POSITIVE;
        int(73_760) * self.sigma_conv(7, |b| self.l(L6_2, b).clone(), n, pos)
            - frac(194_432, 3) * self.sigma_conv(5, |b| self.l(L8_4, b).clone(), n, pos)
            + int(60_336) * self.sigma_conv(3, |b| self.l(L10_6, b).clone(), n, pos)
    }

    fn s28_cor_rhs(&self, n: usize, l6_2_coefficient: BigRational) -> BigRational {
        use LomadzeSum::*;
        l6_2_coefficient * self.l(L6_2, n)
            - frac(3472, 27) * self.l(L8_4, n)
            - frac(1257, 5) * self.l(L10_6, n)
            + frac(94_477, 735) * self.l(L14_10, n)
            + frac(864, 245) * self.l(L14_8, n)
            + frac(144, 175) * self.l(L14_6, n)
    }

    /// `(lhs, rhs)` of `identity` at `n >= 1`.
    pub fn sides(&self, identity: Identity, n: usize) -> Result<(BigRational, BigRational)> {
        self.sides_with(identity, n, ConvolutionConvention::POSITIVE)
    }

    /// `(lhs, rhs)` with convolution sums taken over `range`. Only the
    /// `E_2(3z) Delta(z)` identity depends on it.
    pub fn sides_in(
        &self,
        identity: Identity,
        n: usize,
        range: SumRange,
    ) -> Result<(BigRational, BigRational)> {
        self.sides_with(identity, n, ConvolutionConvention { range })
    }

    fn sides_with(
        &self,
        identity: Identity,
        n: usize,
        conv: ConvolutionConvention,
    ) -> Result<(BigRational, BigRational)> {
        use Identity::*;
        use LomadzeSum::*;
        self.check(n)?;
        let pos = ConvolutionConvention::POSITIVE;
        let s = |k: u32| self.s2k_bruteforce(k, n).map(int);
        Ok(match identity {
            DecompositionF7 | DecompositionF9 | DecompositionF11 | DecompositionF12
            | DecompositionF14 => {
                let k = identity.decomposition_k().unwrap();
                (self.theta(k)?.at(n).clone(), self.decomposition(k)?.at(n).clone())
            }
            S14Theorem => (s(7)?, self.s2k_formula(7, n, RhoVariant::Printed)?),
            S18Theorem => (s(9)?, self.s2k_formula(9, n, RhoVariant::Printed)?),
            S22Theorem => (s(11)?, self.s2k_formula(11, n, RhoVariant::Printed)?),
            S24Theorem => (s(12)?, self.s24_formula(n)),
            S28Theorem => (s(14)?, self.s28_formula(n)),
            LomadzeS24 => (s(12)?, self.lomadze_s24(n)?),
            LomadzeS28 => (s(14)?, self.lomadze_s28(n)?),
            TauEq => (self.delta.at(n).clone(), self.tau_via_lattice_sums(n)?),
            Tau6_3 => (self.d6_3.at(n).clone(), self.l(L6_2, n) / int(12)),
            Tau8_3 => (self.d8_3.at(n).clone(), self.l(L8_4, n) / int(108)),
            Tau7Chi => (self.d7.at(n).clone(), self.l(L7_3, n) / int(30)),
            Tau9Chi => (
                int(27) * self.d9_1.at(n) + self.d9_2.at(n),
                self.l(L9_5, n) / int(168),
            ),
            Tau11Chi => (
                self.d11_1.at(n) + int(9) * self.d11_2.at(n),
                frac(5, 81) * self.l(L11_7, n),
            ),
            Tau10_3_2 => {
                let rhs = arith::factorize(n as u64)
                    .into_iter()
                    .map(|(p, e)| self.tau10(p.pow(e) as usize))
                    .product::<BigRational>();
                (self.tau10(n), rhs)
            }
            RamanujanConvolution => (
                self.sigma_conv(1, |b| self.delta.at(b).clone(), n, pos),
                frac(1 - n as i64, 24) * self.delta.at(n),
            ),
            E2DeltaConvolution => self.e2_delta_sides(n, conv),
            S28Comparison => {
                let lhs = int(107_264)
                    * (self.delta.at(n)
                        + int(12) * self.sigma_conv(1, |b| self.delta.at(b).clone(), n, pos)
                        - int(36) * self.sigma_tau_3(n, pos))
                    - int(12_448) * self.d8_3.at(n)
                    - int(3016) * self.d6_3.at(n)
                    + int(6_273_792) * self.sigma_conv(5, |b| self.d8_3.at(b).clone(), n, pos)
                    - int(1_447_680) * self.sigma_conv(7, |b| self.d6_3.at(b).clone(), n, pos);
                let rhs = frac(188_954, 735) * self.l(L14_10, n)
                    + frac(1728, 245) * self.l(L14_8, n)
                    + frac(288, 175) * self.l(L14_6, n);
                (lhs, rhs)
            }
            S28Intermediate => {
                let lhs = int(1844) * self.d6_3.at(n)
                    + int(13_888) * self.d8_3.at(n)
                    + int(30_168) * self.tau10(n)
                    + int(885_120) * self.sigma_conv(7, |b| self.d6_3.at(b).clone(), n, pos)
                    - int(6_999_552) * self.sigma_conv(5, |b| self.d8_3.at(b).clone(), n, pos)
                    + int(7_240_320) * self.sigma_conv(3, |b| self.tau10(b), n, pos);
                let rhs = frac(94_477, 735) * self.l(L14_10, n)
                    + frac(864, 245) * self.l(L14_8, n)
                    + frac(144, 175) * self.l(L14_6, n);
                (lhs, rhs)
            }
            S28CorPrinted => (self.s28_cor_lhs(n), self.s28_cor_rhs(n, frac(461, 3))),
            S28CorDerived => (self.s28_cor_lhs(n), self.s28_cor_rhs(n, frac(-461, 3))),
        })
    }

    fn scan(
        &self,
        identity: Identity,
        n_max: usize,
        conv: ConvolutionConvention,
    ) -> Result<Vec<Mismatch>> {
        let mut out = Vec::new();
        for n in 1..=n_max {
            let (lhs, rhs) = self.sides_with(identity, n, conv)?;
            if lhs != rhs {
                out.push(Mismatch { n, lhs, rhs });
            }
        }
        Ok(out)
    }

    /// Checks `identity` for `1 <= n <= n_max`.
    pub fn verify(&self, identity: Identity, n_max: usize) -> Result<IdentityReport> {
        self.check(n_max)?;
        let mut convention = None;
        let mut note = identity.note().map(str::to_string);
        let mut mismatches = self.scan(identity, n_max, ConvolutionConvention::POSITIVE)?;
        if identity == Identity::E2DeltaConvolution {
            convention = Some(SumRange::Positive);
            if !mismatches.is_empty() {
                let retry = self.scan(identity, n_max, ConvolutionConvention::NON_NEGATIVE)?;
                note = Some(format!(
                    "{} mismatches with a,b>=1, {} with a,b>=0",
                    mismatches.len(),
                    retry.len()
                ));
                if retry.is_empty() {
                    convention = Some(SumRange::NonNegative);
                    mismatches = retry;
                }
            }
        }
        let constant_term = match identity.decomposition_k() {
            Some(k) => {
                let lhs = self.theta(k)?.at(0).clone();
                let rhs = self.decomposition(k)?.at(0).clone();
                Some(ConstantTermCheck {
                    matches: lhs == rhs,
                    lhs,
                    rhs,
                })
            }
            None => None,
        };
        let status = match (mismatches.is_empty(), identity.expectation()) {
            (true, _) => ReportStatus::Match,
            (false, Expectation::Documented) => ReportStatus::Documented,
            (false, Expectation::Exact) => ReportStatus::Mismatch,
        };
        Ok(IdentityReport {
            name: identity.name().to_string(),
            n_min: 1,
            n_max,
            status,
            mismatches,
            convention,
            constant_term,
            note,
        })
    }

    /// Runs every identity in `selection` over `1..=n_max`, in order.
    pub fn verify_all(&self, n_max: usize, selection: &[Identity]) -> Result<Vec<IdentityReport>> {
        self.check(n_max)?;
        std::thread::scope(|scope| {
            let handles: Vec<_> = selection
                .iter()
                .map(|&id| scope.spawn(move || self.verify(id, n_max)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("identity check panicked"))
                .collect()
        })
    }

    /// `rho*` as printed against the value implied by brute force, for
    /// `l` in `{6, 8, 10}` and `1 <= n <= n_max`.
    pub fn rho_star_table(&self, n_max: usize) -> Result<Vec<RhoStarRow>> {
        self.check(n_max)?;
        let mut rows = Vec::new();
        for ell in [6u32, 8, 10] {
            let k = ell + 1;
            for n in 1..=n_max {
                let (scalar, cusp) = self.odd_weight_parts(k, n);
                let implied = (int(self.s2k_bruteforce(k, n)?) - cusp) / scalar;
                let printed = self.rho_star(ell, n, RhoVariant::Printed);
                rows.push(RhoStarRow {
                    ell,
                    n,
                    difference: &printed - &implied,
                    eisenstein_closed_form: implied == self.rho_star(ell, n, RhoVariant::Eisenstein),
                    printed,
                    implied,
                });
            }
        }
        Ok(rows)
    }
}

/// Values of `k` with a basis decomposition of `F_k`.
pub const DECOMPOSITION_K: [u32; 5] = [7, 9, 11, 12, 14];

/// Whether any report fails under the given policy.
pub fn any_failure(reports: &[IdentityReport], strict: bool) -> bool {
    reports.iter().any(|r| r.fails(strict))
}
