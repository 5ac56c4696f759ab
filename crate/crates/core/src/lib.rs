//! Numerical toolkit for quantum replacer (erasure-type) channels.
//!
//! Everything here operates on dense complex vectors and matrices over
//! multi-site tensor-product spaces at desk scale. The crate decides whether
//! a code subspace is correctable for replacer channels on a chosen subset of
//! sites, extracts the isometry / ancilla-state decomposition that certifies
//! correctability, synthesizes and verifies the recovery channel, and ships a
//! qubit stabilizer engine with erasure-correctability and cleaning checks.

pub mod channels;
pub mod codes;
pub mod corpus;
pub mod error;
pub mod sampling;
pub mod stabilizer;
pub mod structure;
pub mod tensor;

pub use error::{Error, Result};

/// Default absolute tolerance for validity and correctability checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Threshold below which Schmidt coefficients and eigenvalues count as zero.
pub const RANK_TOL: f64 = 1e-8;
