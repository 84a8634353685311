//! Exact lattice-polytope geometry, Plücker embeddings of toric varieties,
//! and small machine-learning tools for predicting invariants from them.

pub mod dataio;
pub mod error;
pub mod hilbert;
pub mod lattice;
pub mod mds;
pub mod mlkit;
pub mod pluecker;
pub mod polytope;

pub use error::{Error, Result};
pub use lattice::{BigInteger, IntMatrix, Rational};
pub use pluecker::PlueckerCoordinates;
pub use polytope::{is_unimodular_equivalent, HalfspaceSystem, LatticePolytope, Polytope, RationalPolytope};
