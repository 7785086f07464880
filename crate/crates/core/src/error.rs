use thiserror::Error;

/// Errors raised by code construction, encoding, geometry queries and decoding.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters K={k}, D={d}: need 1 <= D <= K-1")]
    InvalidParams { k: usize, d: usize },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },

    #[error("cell ({row}, {col}) is zero")]
    ZeroCell { row: usize, col: usize },

    #[error("cell ({row}, {col}) lies in the top identity block")]
    TopBlock { row: usize, col: usize },

    #[error("cell ({row}, {col}) is not in an even submatrix")]
    NotEvenBlock { row: usize, col: usize },

    #[error("no 1 to the right of cell ({row}, {col})")]
    NoRightNeighbor { row: usize, col: usize },

    #[error("side-information for message {index} is missing")]
    MissingSideInformation { index: usize },

    #[error("invalid bit character {0:?}")]
    InvalidBit(char),

    #[error("malformed matrix text: {0}")]
    Parse(String),

    #[error("unsupported field modulus {0}")]
    UnsupportedField(u8),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
