use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,

    #[error("coefficient q^{n} requested but series is only known to precision {precision}")]
    OutOfPrecision { n: usize, precision: usize },

    #[error("eta quotient has total q-exponent {total}/24, which is not an integer")]
    NonIntegralExponent { total: i64 },

    #[error("eta quotient has negative order {total}/24 at infinity")]
    NegativeOrder { total: i64 },

    #[error("E_{{{k},chi,psi}} needs a nontrivial character and k > 2")]
    InvalidEisenstein { k: u32 },

    #[error("character parity mismatch: chi(-1)*psi(-1) must equal (-1)^{k}")]
    ParityMismatch { k: u32 },

    #[error("unknown form `{0}`")]
    UnknownForm(String),

    #[error("unknown lattice sum `{0}`")]
    UnknownSum(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("k = {k} is not supported here; valid values are {valid:?}")]
    UnsupportedK { k: u32, valid: Vec<u32> },

    #[error("n = {requested} exceeds the working precision {available}")]
    PrecisionTooLow { requested: usize, available: usize },

    #[error("{name} is not normalized: q^1 coefficient is {leading}")]
    NotNormalized { name: String, leading: String },
}

pub type Result<T> = std::result::Result<T, Error>;
