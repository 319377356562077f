use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NonPrime(u64),

    #[error("q = {0} is even; only odd characteristic is supported")]
    EvenCharacteristic(u64),

    #[error("field order {0} exceeds the supported maximum {max}", max = crate::gf::MAX_ORDER)]
    OrderTooLarge(u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("enumeration needs {required} matrices but the budget is {cap}")]
    BudgetExceeded { required: u128, cap: u64 },

    #[error("alpha must be non-zero")]
    ZeroAlpha,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
