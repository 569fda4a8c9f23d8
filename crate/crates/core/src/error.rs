use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A distribution or function parameter lies outside its valid domain.
    #[error("parameter domain error: {0}")]
    Domain(String),

    /// A sampler step produced an invalid system or non-finite value.
    #[error("numerical failure at iteration {iteration}: {message}")]
    Numerical { iteration: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(iteration: usize, msg: impl Into<String>) -> Self {
        Error::Numerical {
            iteration,
            message: msg.into(),
        }
    }

    /// Attach an iteration index to a numerical failure raised inside a step.
    pub(crate) fn at_iteration(self, iteration: usize) -> Self {
        match self {
            Error::Numerical { message, .. } => Error::Numerical { iteration, message },
            Error::Domain(message) => Error::Numerical { iteration, message },
            other => other,
        }
    }

    /// True for errors caused by bad user input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::Dimension(_) | Error::Parse { .. } | Error::Io(_) | Error::Json(_)
        )
    }
}
