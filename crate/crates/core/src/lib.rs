//! r-neighbor line percolation on finite projective planes.
//!
//! A line holding at least r infected points infects all of its points; the
//! process runs in synchronous rounds until nothing changes. This crate builds
//! the planes ([`plane`]), runs the dynamic ([`percolation`]), generates the
//! extremal configurations ([`constructions`]), evaluates the known bounds
//! ([`bounds`]), searches for extremal sets ([`search`]) and runs the random
//! experiments ([`random_models`]).

pub mod bitset;
pub mod bounds;
pub mod constructions;
pub mod error;
pub mod field;
pub mod percolation;
pub mod plane;
pub mod random_models;
pub mod search;
pub mod table;

pub use bitset::{BitSet, LineSet, PointSet};
pub use error::{Error, Result};
pub use field::Field;
pub use plane::IncidencePlane;
