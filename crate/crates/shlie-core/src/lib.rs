//! Exact-arithmetic computer algebra for strongly homotopy Lie algebras
//! presented by degree 1 symmetric brackets, pairs `(L, A)` with a chosen
//! splitting, modules over the subalgebra, weight-truncated Chevalley-Eilenberg
//! cohomology, Atiyah cocycles and classes, the induced Lie structures on
//! cohomology, and gauge invariance under infinitesimal deformations.
//!
//! All coefficients are exact rationals (or dual numbers over the rationals
//! where a square-zero parameter is involved). There is no floating point
//! anywhere in the crate.

pub mod algebra;
pub mod atiyah;
pub mod complex;
pub mod deform;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod graded;
pub mod liecohom;
pub mod linalg;
pub mod module;
pub mod multilinear;
pub mod pair;
pub mod poly;
pub mod report;
pub mod scalar;

pub use error::Error;
pub use scalar::{Dual, Rat, Ring};

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
