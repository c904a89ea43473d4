use thiserror::Error;

use crate::shapes::Cell;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid scalar `{0}`: expected an integer or `p/d`")]
    ParseScalar(String),
    #[error("q must lie strictly between 0 and 1, got {0}")]
    QOutOfRange(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("mu is not contained in the interior of lambda: cell ({}, {})", .0.0, .0.1)]
    MuNotInterior(Cell),
    #[error("invalid array at cell ({}, {})", .0.0, .0.1)]
    InvalidArray(Cell),
    #[error("malformed array: {0}")]
    MalformedArray(String),
    #[error("cell ({}, {}) is outside the shape", .0.0, .0.1)]
    CellOutsideShape(Cell),
    #[error("empty fiber: the constraint admits no filling")]
    EmptyFiber,
    #[error("state set is not closed under single-cell decrements")]
    NotDownset,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
