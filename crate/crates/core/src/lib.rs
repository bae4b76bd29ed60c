//! Exact computation with algebraic supergroups presented by Harish-Chandra pairs.

// Structure-constant and matrix code reads most clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod fixture;
pub mod gamma;
pub mod grassmann;
pub mod group;
pub mod hcp;
pub mod linalg;
pub mod parity;
pub mod poly;
pub mod report;
pub mod duality;
pub mod env;
pub mod liesuper;
pub mod scalar;
pub mod suites;

pub use error::{Error, Result};
pub use grassmann::{GrassmannAlgebra, GrassmannElement};
pub use parity::Parity;
pub use scalar::{Field, Scalar};
