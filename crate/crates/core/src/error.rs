use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("intersection of an empty family has no ambient dimension")]
    EmptyFamily,

    #[error("basis word {0} is not valid for this carrier")]
    InvalidWord(String),

    #[error("operands live over different carriers")]
    MixedCarriers,

    #[error("subspace has dimension 0")]
    ZeroDimensional,

    #[error("subspace does not contain the unit")]
    MissingUnit,

    #[error("element {0} is not in the subspace")]
    NotInSubspace(String),

    #[error("exhaustion {0} is not supported for this carrier")]
    UnsupportedExhaustion(String),

    #[error("amplification factor must be at least 1")]
    ZeroFactor,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("graph error: {0}")]
    Graph(String),

    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),

    #[error("vertex set touches the window margin (vertex {vertex}, margin {margin})")]
    MarginViolation { vertex: usize, margin: usize },

    #[error("no paradoxical pair: deficiency {deficiency}")]
    NoParadoxicalPair { deficiency: usize },

    #[error("identity check failed: {0}")]
    IdentityFailure(String),

    #[error("series mismatch: {0}")]
    SeriesMismatch(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
