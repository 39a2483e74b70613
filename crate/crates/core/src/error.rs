use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: sqrt({0}) and sqrt({1}) cannot be combined")]
    FieldMismatch(u64, u64),
    #[error("division by zero")]
    DivByZero,
    #[error("not hyperbolic: {0}")]
    NotHyperbolic(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("precision failure: {0}")]
    PrecisionFailure(String),
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("unsupported class: {0}")]
    UnsupportedClass(String),
    #[error("sampling failure: {0}")]
    SamplingFailure(String),
    #[error("degenerate form: {0}")]
    Degenerate(String),
    #[error("matrix is not in SL2(Z): determinant {0}")]
    NotSpecialLinear(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("class is not orthogonal to the canonical class")]
    NotInW,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::DomainError(msg.into())
}
