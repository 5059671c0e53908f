use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid setup: {0}")]
    InvalidSetup(String),

    #[error("empty velocity distribution")]
    EmptyDistribution,

    #[error("at power index {index}: {source}")]
    ScanPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("formula parse error at byte {position}: {message}")]
    Formula { position: usize, message: String },

    #[error("element {0} is missing from the mass table")]
    MissingElement(String),

    #[error("substitution n = {n} leaves a negative count of {element}")]
    NegativeCount { n: u32, element: String },

    #[error("geometry blocks beam: none of {launched} launched molecules passed all delimiters")]
    GeometryBlocksBeam { launched: usize },

    #[error("insufficient samples: {got} < {min}")]
    InsufficientSamples { got: usize, min: usize },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("{path}:{line}: {message}")]
    Data {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn at_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// True for errors caused by the user's configuration or input files
    /// rather than by a failing computation.
    pub fn is_config_error(&self) -> bool {
        match self {
            Error::Config { .. } | Error::Data { .. } | Error::Formula { .. } => true,
            Error::Io { .. } => true,
            Error::InsufficientSamples { .. } => true,
            Error::Stage { source, .. } | Error::ScanPoint { source, .. } => {
                source.is_config_error()
            }
            _ => false,
        }
    }
}

/// Fails with a domain error unless `value` is finite and strictly positive.
pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive, got {value}")))
    }
}

pub(crate) fn ensure_non_negative(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must be non-negative, got {value}"
        )))
    }
}
