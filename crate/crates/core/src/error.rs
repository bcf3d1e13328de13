use thiserror::Error;

/// Errors raised by the algebra engine and the analyses built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient variable lists differ")]
    AmbientMismatch,
    #[error("variable index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("invalid variable list: {0}")]
    InvalidVariables(String),
    #[error("the zero operator has no principal symbol")]
    ZeroOperator,
    #[error("not a vector field: {0}")]
    NotAVectorField(String),
    #[error("invalid foliation presentation: {0}")]
    InvalidPresentation(String),
    #[error("Poisson matrix is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("Poisson bracket violates the Jacobi identity on coordinates ({0}, {1}, {2})")]
    JacobiFailure(usize, usize, usize),
    #[error("hypotheses not verified: {0}")]
    HypothesesNotVerified(String),
    #[error("truncation level {m_max} is below the largest generator degree {needed}")]
    TruncationTooSmall { m_max: usize, needed: usize },
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
