use thiserror::Error;

use crate::expr::ExprError;

/// Errors raised by the library. Probe outcomes (violations, non-finite
/// evaluations) are never errors; they are recorded in reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("unknown gallery entry `{0}`")]
    UnknownFunction(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("ray is not monotone (inversion between t = {t_lo} and t = {t_hi})")]
    NonMonotoneRay { t_lo: f64, t_hi: f64 },

    #[error("bracket expansion exhausted up to {cap:e} while seeking value {target}")]
    BracketExhausted { target: f64, cap: f64 },

    #[error("value {value} outside the domain of the transform: {reason}")]
    OutOfDomain { value: f64, reason: String },

    #[error("no certificate: {0}")]
    NoCertificate(String),

    #[error(transparent)]
    Expr(#[from] ExprError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
