use thiserror::Error;

/// Errors raised by the evaluators and oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("quadrature did not converge (best value {best}, error estimate {err:e})")]
    Quadrature { best: f64, err: f64 },

    #[error("grid cannot resolve the requested feature: {0}")]
    Resolution(String),

    #[error("grid too large: {0}")]
    GridTooLarge(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("unsupported query: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
