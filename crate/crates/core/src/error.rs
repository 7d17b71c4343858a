use thiserror::Error;

/// Errors raised by the polynomial engine and everything built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FglError {
    /// Operands disagree on variables, domain, parameters or shape.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A denominator divisible by p was met while reducing into F_p.
    #[error("integrality error: coefficient {coefficient} has a denominator divisible by {p}")]
    Integrality { coefficient: String, p: u64 },

    /// Something that must hold by construction did not. Always a bug.
    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    #[error("grading error: term x^{i}*y^{j} has non-integral v_s exponent (i + j - 1)/{modulus}")]
    Grading { i: u32, j: u32, modulus: u64 },

    /// A truncated check would hold for trivial reasons.
    #[error("vacuous check: {0}")]
    Vacuity(String),

    /// A configured resource guard refused the computation.
    #[error("resource guard: {what} (projected {projected}, limit {limit})")]
    Resource {
        what: String,
        projected: u128,
        limit: u128,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, FglError>;

pub(crate) fn structural(msg: impl Into<String>) -> FglError {
    FglError::Structural(msg.into())
}
