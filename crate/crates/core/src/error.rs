use thiserror::Error;

/// Errors raised by group construction, arithmetic and the FSZ engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FszError {
    /// An element key does not describe an element of the group it was handed to.
    #[error("structural error: {0}")]
    Structural(String),

    /// A precondition on the mathematical input failed (non-central `z`, zero modulus, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation needs to enumerate more elements than the configured budget allows.
    #[error("capacity error: {what} has {size} elements, budget is {budget}")]
    Capacity {
        what: String,
        size: String,
        budget: u64,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = FszError> = std::result::Result<T, E>;

impl FszError {
    pub fn structural(msg: impl Into<String>) -> Self {
        FszError::Structural(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        FszError::Domain(msg.into())
    }

    pub fn capacity(what: impl Into<String>, size: impl ToString, budget: u64) -> Self {
        FszError::Capacity {
            what: what.into(),
            size: size.to_string(),
            budget,
        }
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, FszError::Capacity { .. })
    }
}
