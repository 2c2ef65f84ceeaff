use std::path::PathBuf;

/// Exit code for bad input, usage or validation failures.
pub const EXIT_INVALID: u8 = 2;
/// Exit code for estimation failures, including non-convergence.
pub const EXIT_ESTIMATION: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] esg_irt::Error),

    #[error("{0}")]
    Usage(String),

    #[error("cannot read config {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(
        "estimation did not converge after {iterations} iterations (max residual {max_residual:.3e}); \
         rerun with --allow-nonconverged to keep the estimates"
    )]
    NotConverged { iterations: usize, max_residual: f64 },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_estimation_failure() => EXIT_ESTIMATION,
            CliError::NotConverged { .. } => EXIT_ESTIMATION,
            _ => EXIT_INVALID,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
