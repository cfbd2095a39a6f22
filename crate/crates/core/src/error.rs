use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("quantum numbers out of range: {0}")]
    QuantumNumber(String),

    #[error("operator `{label}` is not Hermitian (max |A - A^dag| = {deviation:.3e})")]
    NotHermitian { label: String, deviation: f64 },

    #[error("eigensolver failed on `{label}`: {reason}")]
    Eigensolver { label: String, reason: String },

    #[error("coupling kind mismatch: expected {expected}, got {actual}")]
    KindMismatch { expected: String, actual: String },

    #[error("channel is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("Kraus set is not trace preserving (max |sum A^dag A - I| = {0:.3e})")]
    NotTracePreserving(f64),

    #[error(
        "hyperbolic regime: lambda^2 + epsilon(epsilon - 2h) = {discriminant:.6e} < 0, \
         the oscillatory closed forms do not apply"
    )]
    HyperbolicRegime { discriminant: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
