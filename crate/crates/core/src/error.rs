use thiserror::Error;

/// Errors raised by the engine.
///
/// The variants map one-to-one onto the CLI exit-code classes: domain and
/// parse problems are usage errors, `InsufficientData`/`InsufficientLimit`
/// are data-insufficiency errors, everything else is numerical.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty domain: {0}")]
    EmptyDomain(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient data: no local parameters at p = {prime} (table covers p <= {limit})")]
    InsufficientData { prime: u64, limit: u64 },

    #[error("insufficient limit: {0}")]
    InsufficientLimit(String),

    #[error("pole of {function} at s = {at}")]
    Pole { function: &'static str, at: String },

    #[error("jet order {have} is below the required order {need}")]
    Order { have: usize, need: usize },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
