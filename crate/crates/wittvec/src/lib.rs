//! Exact p-typical Witt vectors over normed rings.
//!
//! The crate covers finite-length Witt vectors and their norm, inverse
//! limits along Frobenius with the overconvergence seminorms `|·|_{W,b}`,
//! Witt-perfectness tests, tilting of truncated rings, the theta map and a
//! few numerical checks around Frobenius kernels and ghost-constant vectors.

pub mod arrow;
pub mod artin;
pub mod error;
pub mod kernelnorm;
pub mod norm;
pub mod perfect;
pub mod rings;
pub mod tilt;
pub mod universal;
pub mod witt;

pub use error::{Error, Result};
pub use norm::{ExtNorm, Val};
pub use rings::NormedRing;
pub use witt::{GhostVec, WittVec};
