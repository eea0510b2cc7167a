//! Exact commutator expansions for nearest-neighbour spin lattices.
//!
//! The crate counts commutator sequences and lattice-animal histories,
//! evaluates iterated commutators `[H, [H, ... [H, A]]]` in an exact
//! alpha-string basis, counts constructions of rooted lattice trees, runs the
//! Eden growth process and cross-checks everything against dense matrices on
//! lattices small enough to diagonalise.

pub mod eden;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod pauli;
pub mod tower;
pub mod trees;

pub use error::{Error, Result};
