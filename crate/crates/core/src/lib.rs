//! Verification toolkit for lattice-path semi-orthogonal decompositions of
//! derived categories of Grassmannians.
//!
//! The engine computes equivariant cohomology (Borel–Bott–Weil), Ext groups
//! and Euler pairings between irreducible homogeneous bundles on Gr(k,n),
//! equivariant K-classes, and uses them to check block combinatorics,
//! cross-block Ext vanishing, dual exceptional bundles, staircase complexes
//! and K₀ fullness.

pub mod bottweil;
pub mod cache;
pub mod dualstair;
pub mod error;
pub mod grcore;
pub mod homcalc;
#[cfg(test)]
mod invariants;
pub mod kclass;
pub mod littlewood;
pub mod pathblocks;
pub mod verify;

pub use error::{Error, Result};
