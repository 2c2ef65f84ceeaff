use std::path::PathBuf;

/// Errors raised by every module of the toolkit.
///
/// Variants are grouped so that front ends can map them onto exit codes:
/// parse/validation/domain problems are input errors, estimation and
/// scoring problems are model failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("estimation error: {0}")]
    Estimation(String),

    #[error("extreme raw score {raw_score} out of {max_score}; maximum-likelihood ability is infinite")]
    ExtremeScore { raw_score: usize, max_score: usize },

    #[error("normalization error: criterion `{criterion}` is all zero")]
    Normalization { criterion: String },

    #[error("scoring error: {0}")]
    Scoring(String),

    #[error("join error: {0}")]
    Join(String),

    #[error("undefined AUC: {0}")]
    UndefinedAuc(String),

    #[error("scorer failed on record `{id}`: {message}")]
    Scorer { id: String, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the estimator itself rather than of its input.
    pub fn is_estimation_failure(&self) -> bool {
        matches!(self, Error::Estimation(_) | Error::ExtremeScore { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
