use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid subsystem layout: {0}")]
    InvalidLayout(String),

    #[error("matrix is not Hermitian (max |m - m^dagger| = {defect:e}, tolerance {tol:e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("matrix is not positive definite (min eigenvalue {0:e})")]
    NotPositiveDefinite(f64),

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("state is not normalized (norm^2 = {0})")]
    Unnormalized(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Fock cutoff {cutoff} drops probability weight {deficit:e} (> {limit})")]
    TruncationTooLarge { cutoff: usize, deficit: f64, limit: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("link kind mismatch: {0}")]
    KindMismatch(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}
