use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config, or input files.
    #[error("{0}")]
    Input(String),
    /// The sampler or a quadrature could not produce a valid result.
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Numerical(_) => ExitCode::from(1),
        }
    }
}

impl From<shrinkage::Error> for CliError {
    fn from(e: shrinkage::Error) -> Self {
        match e {
            shrinkage::Error::Numerical { .. } | shrinkage::Error::Calibration(_) => CliError::Numerical(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}
