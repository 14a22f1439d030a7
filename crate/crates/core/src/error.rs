use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("side {index} has length {value}, need at least {min}")]
    SideTooSmall { index: usize, value: String, min: u32 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("color {color} out of range 1..={colors}")]
    ColorOutOfRange { color: u64, colors: usize },

    #[error("expected {expected} cells, found {found}")]
    CellCountMismatch { expected: usize, found: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("premise violated: {0}")]
    Premise(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("virtual color mismatch: expected {expected}, certificate has {found}")]
    VirtualColorMismatch { expected: String, found: String },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}
