use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("element is not invertible")]
    NotInvertible,

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// A quasideterminant whose minor is not invertible.
    #[error("quasideterminant undefined: {0}")]
    Undefined(String),

    #[error("pivot block is singular")]
    PivotSingular,

    /// Weight-expression evaluation failed at a concrete Fock level.
    #[error("evaluation failed at level {level}: {reason}")]
    Eval { level: i64, reason: String },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("unsupported division: {0}")]
    UnsupportedDivision(String),

    /// A linear system that should be solvable turned out inconsistent.
    #[error("inconsistent system: {0}")]
    Inconsistent(String),

    #[error("Vandermonde matrix is singular")]
    VandermondeSingular,

    #[error("no root found: {0}")]
    RootNotFound(String),

    #[error("root rejected: {0}")]
    RootRejected(String),

    #[error("unsupported function: {0}")]
    UnsupportedFunction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
