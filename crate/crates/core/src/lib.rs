//! Periodic crystal nets from quotient graphs.
//!
//! A net is described by a finite quotient graph together with a building
//! block (a vector on every directed edge). From that seed this crate
//! unfolds the periodic net, computes its period lattice, enumerates minimal
//! rings, determines point groups, strong isotropy and chirality, decides
//! whether a lattice is orthogonally symmetric, and numerically computes the
//! standard (energy-minimizing) realization of a bare graph.

pub mod analysis;
pub mod block;
pub mod cli;
pub mod error;
pub mod graph;
pub mod lattice;
pub mod linalg;
pub mod net;
pub mod realization;
pub mod rings;
pub mod scalar;
pub mod symmetry;
pub mod verify;

pub use block::{AnyBlock, BuildingBlock};
pub use error::{Error, Result};
pub use graph::{CyclePath, DedgeId, HomologyBasis, QuotientGraph};
pub use lattice::Lattice;
pub use scalar::{Rational, Scalar};
