use thiserror::Error;

use crate::pba::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A table is the wrong size or holds an out-of-range index.
    #[error("malformed {table} table at index {index}: {detail}")]
    Structure {
        table: &'static str,
        index: usize,
        detail: String,
    },

    #[error("elements {0} and {1} are not commeasurable")]
    NotCommeasurable(usize, usize),

    #[error("algebra failed validation: {0}")]
    Invalid(Box<ValidationReport>),

    #[error("{what} exceeds the configured limit of {limit}")]
    SearchTooLarge { what: &'static str, limit: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("incoherent cocone between members {0} and {1}")]
    IncoherentCocone(usize, usize),

    #[error("numerical degeneracy: {0}; supply exactly representable inputs or loosen the tolerance")]
    Degenerate(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for the errors the CLI reports with the cutoff exit code.
    pub fn is_cutoff(&self) -> bool {
        matches!(self, Error::SearchTooLarge { .. })
    }
}
