use thiserror::Error;

use crate::partitions::Partition;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZonalError {
    #[error("Jack parameter must be positive, got {0}")]
    NonPositiveAlpha(f64),
    #[error("partition weight {degree} exceeds the degree cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("reciprocal-argument sum requires nonzero arguments")]
    ZeroArgument,
    #[error("Pochhammer denominator vanishes at partition {0}")]
    ZeroDenominator(Partition),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("spectrum is not doubly degenerate: pairing gap {gap:e} exceeds tolerance {tol:e}")]
    DegeneracyViolation { gap: f64, tol: f64 },
    #[error("power mode {mode} is not available for ensemble {ensemble}")]
    ModeMismatch { mode: String, ensemble: String },
    #[error("sample budget too small: {0}")]
    Budget(String),
    #[error("log-density is not finite")]
    NonFiniteLogDensity,
}

pub type Result<T> = std::result::Result<T, ZonalError>;
