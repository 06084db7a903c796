use thiserror::Error;

use crate::coeff::HSymbol;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("no exact quotient exists")]
    NotDivisible,

    #[error("no value assigned to {0}")]
    MissingAssignment(HSymbol),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operands live in different quantum tori")]
    ContextMismatch,

    #[error("matrix is not skew-symmetric at ({row}, {col})")]
    NotSkewSymmetric { row: usize, col: usize },

    #[error("pair is not compatible: entry ({row}, {col}) of lambda*btilde is {value}")]
    NotCompatible { row: usize, col: usize, value: i64 },

    #[error("exchange matrix does not have full column rank")]
    RankDeficient,

    #[error("D*B is not skew-symmetric at ({row}, {col})")]
    NotSkewSymmetrizable { row: usize, col: usize },

    #[error("mutation in direction {direction} depends on the sign choice")]
    EpsilonMismatch { direction: usize },

    #[error("direction {direction} is out of range 1..={n}")]
    InvalidDirection { direction: usize, n: usize },

    #[error("negative exponent {exponent} on non-monomial variable {index}")]
    NegativeMutableExponent { index: usize, exponent: i64 },

    #[error("Laurent violation: mutation in direction {direction} after word {word:?} is not an exact division")]
    LaurentViolation { direction: usize, word: Vec<usize> },

    #[error("invalid exchange data: {0}")]
    InvalidExchangeData(String),

    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("invalid seed file: {0}")]
    SeedFile(String),
}

impl Error {
    pub(crate) fn syntax(pos: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            message: message.into(),
        }
    }
}
