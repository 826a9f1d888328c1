//! Crate-wide error type.

use std::fmt;
use std::io;

#[derive(Debug)]
pub enum Error {
    /// Invalid configuration (sizes, ratios, ranges).
    Config(String),
    /// Mismatched vector lengths.
    Dimension { expected: usize, got: usize },
    /// Argument outside its mathematical domain.
    Domain(String),
    /// Monte Carlo estimation cannot proceed.
    Estimation(String),
    /// The noise-multiplier series does not decay by its truncation order.
    Divergence { chi: f64, tail: f64 },
    /// Malformed text input.
    Parse { line: usize, msg: String },
    /// Image ingestion failure.
    Ingest(String),
    Io(io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Dimension { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Estimation(msg) => write!(f, "estimation error: {msg}"),
            Error::Divergence { chi, tail } => write!(
                f,
                "series divergence: tail term {tail:.3e} at chi={chi:.6} has not decayed below 1e-8"
            ),
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::Ingest(msg) => write!(f, "ingestion error: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
