use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of a mathematical function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A distribution, table or matrix failed structural validation.
    #[error("validation error: {0}")]
    Validation(String),

    /// A caller-supplied parameter is not allowed for this operation.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The reference (alpha = 1) violation domain is empty.
    #[error("extension undefined: {0}")]
    UndefinedExtension(String),

    /// There is no violation (C_alpha <= epsilon) to compare a penalty against.
    #[error("no violation to dilute: {0}")]
    NoViolation(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Validation(_) => "validation",
            Error::Parameter(_) => "parameter",
            Error::UndefinedExtension(_) => "undefined_extension",
            Error::NoViolation(_) => "no_violation",
            Error::Io { .. } => "io",
        }
    }
}
