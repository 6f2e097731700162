//! Exact calculator for virtual characteristic numbers of virtually smooth
//! spaces.
//!
//! Input data is a truncated Chow-ring model (free graded generators with a
//! degree cutoff), an obstruction-theory pair of bundles whose rank
//! difference is the virtual dimension, and an integration functional on
//! top-degree monomials standing for the virtual fundamental class. On top of
//! that the crate computes, with arbitrary-precision rational arithmetic
//! throughout:
//!
//! - virtual holomorphic Euler characteristics (Riemann-Roch integrals),
//! - the chi_-y genus as an exact polynomial, with virtual Euler number,
//!   signature, and Chern numbers,
//! - the virtual elliptic genus as an exact q-expansion with verifiable
//!   lattice shift identities,
//! - torus-localized versions of all of the above over Laurent series in the
//!   equivariant parameter.

pub mod algebra;
pub mod elliptic;
pub mod error;
pub mod genera;
pub mod ktheory;
pub mod localization;
pub mod verify;

pub use error::{Error, Result};
