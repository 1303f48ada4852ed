//! Finite lattices and their 2-uniform tolerances.
//!
//! The crate builds and enumerates small lattices, decides whether a relation
//! is a (2-uniform) tolerance or congruence, classifies elements as tops and
//! bottoms, tests amicability of two 2-uniform tolerances, and constructs
//! explicit witnesses showing that amicable pairs permute. The [`verify`]
//! module runs these checks exhaustively over catalogs of lattices.

pub mod amicability;
mod bits;
pub mod canon;
pub mod enumerate;
mod error;
pub mod format;
pub mod lattice;
pub mod tolerance;
pub mod verify;
pub mod witness;

pub use bits::{BitMatrix, BitSet};
pub use error::{BoundKind, Error, Result};
pub use lattice::{ElementId, Lattice};
pub use tolerance::{BinaryRelation, Block, RelationImage};
