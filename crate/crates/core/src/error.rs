use thiserror::Error;

/// Errors produced by constructors, reductions and sweeps.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("exponent must be finite and >= 2, got {0}")]
    InvalidExponent(f64),

    #[error("exponent must be > 2 for the bound constants, got {0}")]
    ExponentAtBoundary(f64),

    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("coordinate {index} is not finite")]
    NonFiniteCoordinate { index: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("exponent mismatch: {left} vs {right}")]
    ExponentMismatch { left: f64, right: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid reduced config: {0}")]
    InvalidReducedConfig(String),

    #[error("invalid sign vector: entries must be exactly +1 or -1")]
    InvalidSignVector,

    #[error("sigma = {sigma} outside the admissible range [0, {max}]")]
    SigmaOutOfRange { sigma: f64, max: f64 },

    #[error("n = {n} exceeds the enumeration cap {cap}; use the Monte Carlo path")]
    OverEnumerationCap { n: usize, cap: usize },

    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("bracket failure: {0}")]
    Bracket(String),

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
