//! Interior-point linear programming with inner-iteration preconditioned
//! Krylov least-squares solvers.
//!
//! The solver stack has three nested layers:
//!
//! 1. an infeasible Mehrotra predictor-corrector interior-point loop
//!    ([`ipm`]),
//! 2. a Krylov least-squares middle layer solving the condensed normal
//!    equations each step — CGNE, MRNE or AB-GMRES ([`krylov`]),
//! 3. stationary NE-SOR / NE-SSOR row-action sweeps acting as matrix-free
//!    preconditioners for the middle layer ([`inner`]).
//!
//! Everything operates on rows of a CSR constraint matrix ([`sparse`]); the
//! scaled per-step operator is never materialized ([`normal`]). A dense
//! modified-LDLT baseline ([`ldlt`]) and an MPS reader with LIPSOL-style
//! standardization ([`mps`], [`standard`]) round out the toolkit.

pub mod dense;
pub mod error;
pub mod inner;
pub mod ipm;
pub mod krylov;
pub mod ldlt;
pub mod mps;
pub mod normal;
pub mod operator;
pub mod randlp;
pub mod run;
pub mod sparse;
pub mod standard;

pub use dense::DenseVector;
pub use error::Error;
pub use sparse::CsrMatrix;

/// Convenient result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
