//! Shared error type for constructors, checks, and the enumeration oracle.

use thiserror::Error;

/// Everything that can go wrong outside of a bound simply failing to hold.
///
/// Bound violations are ordinary data (`BoundReport::holds == false`); errors
/// are reserved for malformed inputs, unsupported representations, capacity
/// caps, and broken preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for index set of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("weight at index {index} must be positive and finite, got {value}")]
    InvalidWeight { index: usize, value: f64 },

    #[error("non-finite scalar at index {index}")]
    NonFiniteScalar { index: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index sets do not match")]
    IndexSetMismatch,

    #[error("measure spaces do not match")]
    SpaceMismatch,

    #[error("exponent must be a finite value >= 1 or \"inf\", got {0}")]
    InvalidExponent(String),

    #[error("{0}")]
    Construction(String),

    #[error("bound stated for x != 0")]
    ZeroVector,

    #[error("operation `{operation}` requires a {required} representation")]
    UnsupportedRepresentation {
        operation: &'static str,
        required: &'static str,
    },

    #[error("{what} = {requested} exceeds the supported cap {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("system is not reconstructing (deviation={deviation:e})")]
    NotReconstructing { deviation: f64 },

    #[error("{which} frame is not Parseval (deviation={deviation:e})")]
    NotParseval { which: String, deviation: f64 },

    #[error("support-product minimum {minimum} fell below the coherence bound {bound}")]
    BoundViolation { minimum: f64, bound: f64 },

    #[error("invalid JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
