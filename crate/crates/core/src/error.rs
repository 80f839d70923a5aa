use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A numerical contract was violated (non-hermitian input, oversized matrix, ...).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Parameters fall outside the feasible region of a POVM family.
    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    /// An element could not be converted to the rank-1 real form.
    #[error("element {index} is not rank-1 real: {reason}")]
    Conversion { index: usize, reason: String },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(format!($($arg)*))
    };
}

pub(crate) use invalid;
