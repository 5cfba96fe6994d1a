//! Exact invariant theory for the classical matrix Lie superalgebras.
//!
//! The crate builds the polynomial invariants of `gl`, `sl`, `osp`, `pe`,
//! `spe`, `q` and `sq` acting on copies of the standard module, its parity
//! shift and their duals, and checks by exact linear algebra that the known
//! generating sets span the whole invariant algebra under polarization.

pub mod action;
pub mod algebras;
pub mod combinatorics;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod solver;
pub mod supermatrix;
pub mod superpoly;

pub use error::{Error, Result};
