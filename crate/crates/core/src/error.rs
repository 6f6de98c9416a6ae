use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("spin 2j={two_j} exceeds truncation k={k}")]
    SpinOutOfRange { two_j: u32, k: u32 },

    #[error("k={k} exceeds the limit {max} for {what}")]
    TruncationTooLarge { k: u32, max: u32, what: &'static str },

    #[error("k={k} is not supported here: {reason}")]
    UnsupportedTruncation { k: u32, reason: &'static str },

    #[error("exact integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("closed form is not integral: remainder {remainder} mod 10080 at k={k}")]
    NonIntegral { k: u32, remainder: String },

    #[error("operator {what} is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { what: String, deviation: f64 },

    #[error("operator {what} is not unitary (max deviation {deviation:e})")]
    NotUnitary { what: String, deviation: f64 },

    #[error("dimension {dim} exceeds the dense guard {max}")]
    DimensionGuard { dim: usize, max: usize },

    #[error("invalid control sector: {0}")]
    InvalidSector(String),

    #[error("auxiliary register has dimension {have}, need at least {need}")]
    AuxTooSmall { have: usize, need: usize },

    #[error("gate {index} is invalid for the register layout: {reason}")]
    InvalidGate { index: usize, reason: String },

    #[error("spectrum is not antisymmetric about zero (deviation {0:e})")]
    NotAntisymmetric(f64),

    #[error("gate list parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("register layouts differ: {0}")]
    LayoutMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
