use thiserror::Error;

/// Errors raised by the matrix kernels and the inequality checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input is not Hermitian: ||H - H*||_F = {deviation:e} exceeds {allowed:e}")]
    NonHermitianInput { deviation: f64, allowed: f64 },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps (off-diagonal mass {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("matrix is not positive semi-definite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("sign violation: {0}")]
    SignViolation(String),

    #[error("blocks A and C do not commute: ||AC - CA||_F = {commutator:e}")]
    BlocksDoNotCommute { commutator: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
