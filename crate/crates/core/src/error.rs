use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid lattice: n={n}, k={k} ({reason})")]
    InvalidLattice { n: usize, k: usize, reason: &'static str },

    #[error("graph is disconnected: vertex {unreachable} unreachable from vertex {from}")]
    Disconnected { from: usize, unreachable: usize },

    #[error("no connected graph after {attempts} attempts")]
    GenerationExhausted { attempts: usize },

    #[error("{path}: line {line}, column `{column}`: {message}")]
    Data {
        path: PathBuf,
        line: u64,
        column: String,
        message: String,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("empty sample: {0}")]
    EmptySample(&'static str),

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("singular normal equations")]
    Singular,
}

impl Error {
    pub(crate) fn params(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParams {
            field,
            reason: reason.into(),
        }
    }

    /// Coarse failure class, used for process exit codes.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidParams { .. } | Error::InvalidLattice { .. } => ErrorClass::Config,
            Error::Data { .. } | Error::Csv { .. } => ErrorClass::Io,
            _ => ErrorClass::Numeric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Io,
    Numeric,
}
