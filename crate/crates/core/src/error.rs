use thiserror::Error;

/// Errors raised by the exact-arithmetic and cochain machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible coefficient fields: {0} and {1}")]
    IncompatibleFields(String, String),
    #[error("pole at specialization {0}")]
    PoleAtSpecialization(String),
    #[error("no embedding of {0} into {1}")]
    NoEmbedding(String, String),
    #[error("series is not divisible by h: {0}")]
    Divisibility(String),
    #[error("{0} is not a field element; exact linear algebra needs a field")]
    NotAField(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("derivations do not commute: {0}")]
    NonCommutingDerivations(String),
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("bidegree ({0},{1}) out of range")]
    OutOfRange(i64, i64),
    #[error("not a complex: differential squares to a nonzero map at degree {0}")]
    NotAComplex(usize),
    #[error("not a deformation: {0}")]
    NotADeformation(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

pub type Result<T> = std::result::Result<T, Error>;
