use thiserror::Error;

/// Errors raised by the linear-algebra primitives, state constructors, and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A_ij - conj(A_ji)| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("Jacobi diagonalization did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operation requires dimension {expected}, got {actual}")]
    WrongDimension { expected: &'static str, actual: usize },

    #[error("bad dimension {0}")]
    BadDimension(usize),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("Bloch vector has norm {norm} > 1")]
    BlochOutOfBall { norm: f64 },

    #[error("shift index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("rank {rank} not in 1..={dim}")]
    BadRank { rank: usize, dim: usize },

    #[error("probability vector invalid: {0}")]
    BadProbabilities(String),

    #[error("grid oracle limited to dimension <= 3, got {0}")]
    DimensionTooLarge(usize),

    #[error("channel is not incoherent")]
    NotIncoherent,

    #[error("channel is not trace preserving (completeness residual {residual:e})")]
    NotTracePreserving { residual: f64 },

    #[error("optimizer failed: {0}")]
    OptimizerFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
