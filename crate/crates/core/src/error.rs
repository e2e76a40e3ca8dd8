use thiserror::Error;

/// Errors raised by constructors and operations whose preconditions fail.
///
/// Negative verdicts (a partition that is not equitable, a function that is
/// not an eigenfunction) are values, not errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph parameters n={n}, q={q}: {reason}")]
    InvalidParams { n: usize, q: usize, reason: &'static str },

    #[error("vertex index {index} out of range (vertex count {count})")]
    VertexOutOfRange { index: usize, count: usize },

    #[error("symbol {symbol} out of range for alphabet size {q}")]
    SymbolOutOfRange { symbol: usize, q: usize },

    #[error("tuple has length {got}, expected {expected}")]
    TupleLength { got: usize, expected: usize },

    #[error("coordinate {coord} out of range for n={n}")]
    CoordinateOutOfRange { coord: usize, n: usize },

    #[error("eigenvalue index {index} out of range [0, {n}]")]
    EigenvalueIndexOutOfRange { index: usize, n: usize },

    #[error("malformed automorphism: {0}")]
    MalformedAutomorphism(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid quotient matrix: {0}")]
    InvalidQuotient(String),

    #[error("graph parameters do not match: {0}")]
    ParamsMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("invalid symbol blocks: {0}")]
    InvalidBlocks(String),

    #[error("construction output failed re-verification: {0}")]
    Reverification(String),

    #[error("classifier contradiction: {0}")]
    ClassifierContradiction(String),

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
