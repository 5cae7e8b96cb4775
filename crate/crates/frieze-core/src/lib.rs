//! Frieze patterns of type D from triangulations of a once-punctured disc.
//!
//! The crate builds the face complex of a (tagged) triangulation, counts
//! matchings between boundary vertices and faces of truncated complexes, and
//! assembles the resulting numbers into a frieze pattern whose multiplicative
//! relations it can verify. A companion cluster-algebra module cross-checks
//! the patterns through quiver mutation with unit specialisation.

pub mod cluster;
pub mod complex;
pub mod error;
pub mod frieze;
pub mod matching;
pub mod tagged;
pub mod surface;

pub use error::{Error, Result};
