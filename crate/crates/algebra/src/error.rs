use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,

    #[error("operands live in different fields: {left} and {right}")]
    FieldMismatch { left: String, right: String },

    #[error("invalid minimal polynomial: {0}")]
    InvalidMinimalPolynomial(String),

    #[error("field degree {requested} exceeds the configured cap {cap}")]
    FieldDegreeCap { requested: usize, cap: usize },

    #[error("factorization failed: {reason} (partial factors: {partial:?})")]
    FactorizationFailure { reason: String, partial: Vec<String> },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
