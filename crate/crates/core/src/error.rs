use thiserror::Error;

/// Errors raised by the symbolic pipelines and the quadrature layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("malformed rational {0:?}")]
    MalformedRational(String),

    #[error("insufficient input coefficients: need a_j up to j = {needed}, got up to j = {got}")]
    InsufficientCoefficients { needed: u32, got: u32 },

    #[error("truncation too short: k = {k} must be at least m + 1 = {}", m + 1)]
    TruncationTooShort { m: u32, k: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precision failure: {reason} (best estimate {best_estimate}, error {best_error})")]
    PrecisionFailure {
        reason: String,
        best_estimate: String,
        best_error: String,
    },

    #[error("zero bracketing failed near t = {0}; increase sampling density")]
    ZeroBracketing(String),

    #[error("insufficient data: {usable} usable grid points, at least {required} required")]
    InsufficientData { usable: usize, required: usize },

    #[error("fixture line {line}: {message}")]
    Fixture { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
