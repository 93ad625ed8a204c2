//! Representation numbers of `F_k = sum_j (x_{2j-1}^2 + x_{2j-1} x_{2j} + x_{2j}^2)`
//! and sums of polynomials in `x_1` over the solution sets `F_k(x) = n`.
//!
//! `F_k` splits as `F_1 ⊕ F_{k-1}` with `x_1` living in the first block, so
//!
//! ```text
//! M_t^(k)(n) = sum_{F_k(x) = n} x_1^t = sum_{a + b = n} M_t^(1)(a) s_{2(k-1)}(b)
//! ```
//!
//! and every such sum reduces to convolutions of the `k = 1` data.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Pow, Zero};

use crate::error::{Error, Result};
use crate::series::QSeries;

/// Even `x_1` powers that are tabulated.
pub const MOMENT_ORDERS: [u32; 5] = [0, 2, 4, 6, 8];

/// Largest block count for which moment tables are built. The largest
/// lattice sum in the catalog runs over `F_10`.
pub const MAX_MOMENT_BLOCKS: usize = 10;

/// Largest block count for which representation numbers are built.
pub const MAX_THETA_BLOCKS: usize = 14;

fn order_index(t: u32) -> usize {
    MOMENT_ORDERS
        .iter()
        .position(|&o| o == t)
        .unwrap_or_else(|| panic!("moment order {t} not in {MOMENT_ORDERS:?}"))
}

/// All `(x1, x2)` with `x1^2 + x1 x2 + x2^2 = n`.
///
/// `F_1 >= 3/4 x1^2`, so `|x1| <= sqrt(4n/3)`; for each `x1` the quadratic in
/// `x2` has discriminant `4n - 3 x1^2`, which must be a perfect square of the
/// same parity as `x1`.
pub fn f1_solutions(n: u64) -> Vec<(i64, i64)> {
    let n = n as i64;
    let bound = (4 * n / 3).sqrt();
    let mut out = Vec::new();
    for x1 in -bound..=bound {
        let disc = 4 * n - 3 * x1 * x1;
        if disc < 0 {
            continue;
        }
        let s = disc.sqrt();
        if s * s != disc || (s - x1).rem_euclid(2) != 0 {
            continue;
        }
        out.push((x1, (-x1 + s) / 2));
        if s != 0 {
            out.push((x1, (-x1 - s) / 2));
        }
    }
    out
}

/// `n -> sum_{F_k(x) = n} x_1^t` for `0 <= n <= precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTable {
    pub k: usize,
    pub t: u32,
    pub values: Vec<BigInt>,
}

impl MomentTable {
    pub fn precision(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Result<&BigInt> {
        self.values.get(n).ok_or(Error::OutOfPrecision {
            n,
            precision: self.precision(),
        })
    }
}

/// Enumerates `F_1` up to `precision`: the theta series and the `k = 1`
/// moment tables for every order in [`MOMENT_ORDERS`].
pub fn enumerate_f1(precision: usize) -> (QSeries, Vec<MomentTable>) {
    let mut tables: Vec<MomentTable> = MOMENT_ORDERS
        .iter()
        .map(|&t| MomentTable {
            k: 1,
            t,
            values: vec![BigInt::zero(); precision + 1],
        })
        .collect();
    for n in 0..=precision {
        for (x1, _) in f1_solutions(n as u64) {
            for table in tables.iter_mut() {
                table.values[n] += Pow::pow(BigInt::from(x1), table.t);
            }
        }
    }
    let theta = QSeries::from_integers(tables[0].values.iter().cloned());
    (theta, tables)
}

/// Truncated integer convolution.
pub fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let p = a.len().min(b.len());
    (0..p)
        .map(|n| {
            (0..=n)
                .filter(|&i| !a[i].is_zero() && !b[n - i].is_zero())
                .map(|i| &a[i] * &b[n - i])
                .sum()
        })
        .collect()
}

fn delta_at_zero(precision: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); precision + 1];
    v[0] = BigInt::from(1);
    v
}

/// `s_{2k}(n)` for `0 <= n <= precision`, by repeated convolution with the
/// `F_1` counts (`s_0` is the unit sequence).
pub fn s2k_bruteforce(k: usize, precision: usize) -> Vec<BigInt> {
    let (_, tables) = enumerate_f1(precision);
    let base = &tables[0].values;
    (0..k).fold(delta_at_zero(precision), |acc, _| convolve(&acc, base))
}

/// `M_t^(k)` built as `M_t^(1) * s_{2(k-1)}`.
pub fn moment_table(k: usize, t: u32, precision: usize) -> MomentTable {
    assert!(k >= 1, "F_k needs at least one block");
    let (_, tables) = enumerate_f1(precision);
    let rest = s2k_bruteforce(k - 1, precision);
    MomentTable {
        k,
        t,
        values: convolve(&tables[order_index(t)].values, &rest),
    }
}

/// Precomputed representation numbers and moment tables at one precision.
#[derive(Clone, Debug)]
pub struct LatticeTables {
    precision: usize,
    f1: QSeries,
    /// `counts[k][n] = s_{2k}(n)` for `k <= MAX_THETA_BLOCKS`.
    counts: Vec<Vec<BigInt>>,
    /// `moments[k - 1][order_index(t)]` for `1 <= k <= MAX_MOMENT_BLOCKS`.
    moments: Vec<Vec<MomentTable>>,
}

impl LatticeTables {
    pub fn new(precision: usize) -> Self {
        let (f1, base) = enumerate_f1(precision);
        let mut counts = vec![delta_at_zero(precision)];
        for k in 1..=MAX_THETA_BLOCKS {
            let next = convolve(&counts[k - 1], &base[0].values);
            counts.push(next);
        }
        let moments = (1..=MAX_MOMENT_BLOCKS)
            .map(|k| {
                base.iter()
                    .map(|b| MomentTable {
                        k,
                        t: b.t,
                        values: convolve(&b.values, &counts[k - 1]),
                    })
                    .collect()
            })
            .collect();
        Self {
            precision,
            f1,
            counts,
            moments,
        }
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// The theta series of `F_1`.
    pub fn f1(&self) -> &QSeries {
        &self.f1
    }

    /// `s_{2k}` for `0 <= n <= precision`.
    pub fn counts(&self, k: usize) -> Result<&[BigInt]> {
        self.counts
            .get(k)
            .map(Vec::as_slice)
            .ok_or(Error::UnsupportedK {
                k: k as u32,
                valid: (0..=MAX_THETA_BLOCKS as u32).collect(),
            })
    }

    pub fn moment(&self, k: usize, t: u32) -> Result<&MomentTable> {
        if k == 0 || k > MAX_MOMENT_BLOCKS {
            return Err(Error::UnsupportedK {
                k: k as u32,
                valid: (1..=MAX_MOMENT_BLOCKS as u32).collect(),
            });
        }
        Ok(&self.moments[k - 1][order_index(t)])
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

    pub fn lomadze_sum(&self, spec: &LomadzeSumSpec, n: usize) -> Result<BigInt> {
        self.check(n)?;
        let nn = BigInt::from(n);
        let mut total = BigInt::zero();
        for term in &spec.terms {
            let m = &self.moment(spec.blocks, term.power)?.values[n];
            total += term.coefficient_at(&nn) * m;
        }
        Ok(total)
    }

    /// The sequence `n -> L(n)` for `0 <= n <= precision`.
    pub fn lomadze_values(&self, spec: &LomadzeSumSpec) -> Result<Vec<BigInt>> {
        (0..=self.precision)
            .map(|n| self.lomadze_sum(spec, n))
            .collect()
    }
}

/// One term `c(n) * x_1^power`, with `c` an integer polynomial in `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LomadzeTerm {
    pub power: u32,
    /// Coefficients of `c(n)` in increasing degree.
    pub poly: Vec<i64>,
}

impl LomadzeTerm {
    fn new(power: u32, poly: &[i64]) -> Self {
        Self {
            power,
            poly: poly.to_vec(),
        }
    }

    pub fn coefficient_at(&self, n: &BigInt) -> BigInt {
        self.poly
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &c| acc * n + c)
    }
}

/// Identifies one of the catalogued lattice sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LomadzeSum {
    L12_8,
    L12_6,
    L12_4,
    L8_4,
    L6_2,
    /// The combined `F_4` sum in the tau formula.
    Lcal4,
    L14_10,
    L14_8,
    L14_6,
    L10_6,
    /// Weight-7 newform sum over `F_3`.
    L7_3,
    /// Weight-9 combination sum over `F_5`.
    L9_5,
    /// Weight-11 combination sum over `F_7`.
    L11_7,
}

impl LomadzeSum {
    pub const ALL: [LomadzeSum; 13] = [
        Self::L12_8,
        Self::L12_6,
        Self::L12_4,
        Self::L8_4,
        Self::L6_2,
        Self::Lcal4,
        Self::L14_10,
        Self::L14_8,
        Self::L14_6,
        Self::L10_6,
        Self::L7_3,
        Self::L9_5,
        Self::L11_7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::L12_8 => "L_12_8",
            Self::L12_6 => "L_12_6",
            Self::L12_4 => "L_12_4",
            Self::L8_4 => "L_8_4",
            Self::L6_2 => "L_6_2",
            Self::Lcal4 => "Lcal_4",
            Self::L14_10 => "L_14_10",
            Self::L14_8 => "L_14_8",
            Self::L14_6 => "L_14_6",
            Self::L10_6 => "L_10_6",
            Self::L7_3 => "L_7_3",
            Self::L9_5 => "L_9_5",
            Self::L11_7 => "L_11_7",
        }
    }

    pub fn spec(self) -> LomadzeSumSpec {
        let t = LomadzeTerm::new;
        let (weight, blocks, terms) = match self {
            Self::L12_8 => (12, 8, vec![t(4, &[135]), t(2, &[0, -54]), t(0, &[0, 0, 2])]),
            Self::L12_6 => (
                12,
                6,
                vec![
                    t(6, &[162]),
                    t(4, &[0, -162]),
                    t(2, &[0, 0, 36]),
                    t(0, &[0, 0, 0, -1]),
                ],
            ),
            Self::L12_4 => (
                12,
                4,
                vec![
                    t(8, &[1215]),
                    t(6, &[0, -2268]),
                    t(4, &[0, 0, 1260]),
                    t(2, &[0, 0, 0, -210]),
                    t(0, &[0, 0, 0, 0, 5]),
                ],
            ),
            Self::L8_4 => (8, 4, vec![t(4, &[45]), t(2, &[0, -30]), t(0, &[0, 0, 2])]),
            Self::L6_2 => (6, 2, vec![t(4, &[9]), t(2, &[0, -9]), t(0, &[0, 0, 1])]),
            // 164025 x^8 - 306180 n x^6 + 45(3780 n^2 - 4121) x^4
            //   - 30(945 n^2 - 4121) n x^2 + 675 n^4 - 8242 n^2
            Self::Lcal4 => (
                12,
                4,
                vec![
                    t(8, &[164_025]),
                    t(6, &[0, -306_180]),
                    t(4, &[-45 * 4121, 0, 45 * 3780]),
                    t(2, &[0, 30 * 4121, 0, -30 * 945]),
                    t(0, &[0, 0, -8242, 0, 675]),
                ],
            ),
            Self::L14_10 => (14, 10, vec![t(4, &[99]), t(2, &[0, -33]), t(0, &[0, 0, 1])]),
            Self::L14_8 => (
                14,
                8,
                vec![
                    t(6, &[594]),
                    t(4, &[0, -495]),
                    t(2, &[0, 0, 90]),
                    t(0, &[0, 0, 0, -2]),
                ],
            ),
            Self::L14_6 => (
                14,
                6,
                vec![
                    t(8, &[8019]),
                    t(6, &[0, -12_474]),
                    t(4, &[0, 0, 5670]),
                    t(2, &[0, 0, 0, -756]),
                    t(0, &[0, 0, 0, 0, 14]),
                ],
            ),
            // 21, not 27, on the n x^2 term.
            Self::L10_6 => (10, 6, vec![t(4, &[42]), t(2, &[0, -21]), t(0, &[0, 0, 1])]),
            Self::L7_3 => (7, 3, vec![t(4, &[15]), t(2, &[0, -12]), t(0, &[0, 0, 1])]),
            Self::L9_5 => (9, 5, vec![t(4, &[63]), t(2, &[0, -36]), t(0, &[0, 0, 2])]),
            Self::L11_7 => (11, 7, vec![t(4, &[54]), t(2, &[0, -24]), t(0, &[0, 0, 1])]),
        };
        LomadzeSumSpec {
            sum: self,
            weight,
            blocks,
            terms,
        }
    }
}

impl fmt::Display for LomadzeSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LomadzeSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownSum(s.to_string()))
    }
}

/// A lattice sum `sum_{F_blocks(x) = n} sum_terms c(n) x_1^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LomadzeSumSpec {
    pub sum: LomadzeSum,
    pub weight: u32,
    pub blocks: usize,
    pub terms: Vec<LomadzeTerm>,
}

impl LomadzeSumSpec {
    pub fn name(&self) -> &'static str {
        self.sum.name()
    }
}

pub fn lomadze_catalog() -> Vec<LomadzeSumSpec> {
    LomadzeSum::ALL.iter().map(|l| l.spec()).collect()
}
