use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GvfError {
    /// An input outside the domain of an operation (zero where a unit is
    /// required, an invalid parameter, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two values live over different fields or incompatible contexts.
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },

    /// `(-inf) + (+inf)` or a comparison involving such a value.
    #[error("undefined extended sum: {0}")]
    Undefined(String),

    /// The value is not exactly representable (continuous places).
    #[error("value is not exact: {0}")]
    NonExact(String),

    /// An operation is not implemented for the given field.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A numerical routine failed to certify its result.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// Malformed input text; `offset` is a 1-based column.
    #[error("parse error at column {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A bounded search ran out of budget before finishing.
    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
}

impl GvfError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        GvfError::Domain(msg.into())
    }

    /// `pos` is a 0-based byte position, reported as a 1-based column.
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        GvfError::Parse {
            offset: pos + 1,
            message: msg.into(),
        }
    }

    pub(crate) fn mismatch(expected: impl ToString, found: impl ToString) -> Self {
        GvfError::FieldMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, GvfError>;
