//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced while parsing, validating, or computing with
/// triangulations and friezes.
#[derive(Debug, Error)]
pub enum Error {
    /// An arc description could not be parsed or refers to a vertex
    /// outside `1..=n`.
    #[error("invalid arc: {0}")]
    InvalidArc(String),

    /// A set of arcs is not a triangulation (incompatible pair, wrong
    /// cardinality, or not maximal).
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),

    /// A frieze entry label `(i, j)` lies outside the valid index range.
    #[error("invalid entry label: {0}")]
    InvalidLabel(String),

    /// A raw grid of numbers does not have the shape of a frieze pattern.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A proposed slice does not have the required staircase shape.
    #[error("invalid slice: {0}")]
    InvalidSlice(String),

    /// Input data admits no consistent frieze pattern (a reconstruction
    /// step produced a non-integral or non-positive value, or left
    /// entries undetermined).
    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
