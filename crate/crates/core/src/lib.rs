//! Exact q-expansions of modular forms attached to sums of the binary form
//! `x^2 + xy + y^2`, representation numbers, lattice sums over the solution
//! sets, and exact verification of the identities relating them.
//!
//! - [`series`]: truncated power series over the rationals
//! - [`arith`]: characters, divisor sums, Bernoulli numbers
//! - [`forms`]: Eisenstein series, eta quotients, cusp forms, theta series
//! - [`lattice`]: representation numbers, `x_1`-moments and lattice sums
//! - [`identities`]: closed-form formulas and identity reports

pub mod arith;
pub mod error;
pub mod forms;
pub mod identities;
pub mod lattice;
pub mod series;

pub use error::{Error, Result};
pub use identities::{Context, Identity, IdentityReport, ReportStatus};
pub use lattice::{LatticeTables, LomadzeSum};
pub use series::QSeries;

/// Default number of coefficients beyond `q^0`.
pub const DEFAULT_PRECISION: usize = 200;
