use thiserror::Error;

/// Failures surfaced by the command-line front end, each mapped to a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] modtrace_core::Error),

    #[error("no sign change on [{lo}, {hi}]: g(lo) = {g_lo}, g(hi) = {g_hi}")]
    NoSignChange { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("verification failed")]
    VerificationFailed,

    #[error("solver did not converge")]
    Unconverged,
}

impl CliError {
    /// 0 ok, 1 verification failure, 2 input error, 3 non-convergence, 4 bracketing failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed => 1,
            CliError::Input(_) | CliError::Io { .. } | CliError::Core(_) => 2,
            CliError::Unconverged => 3,
            CliError::NoSignChange { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
