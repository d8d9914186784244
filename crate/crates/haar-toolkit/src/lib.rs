//! # haar-toolkit
//!
//! Exact and Monte-Carlo computations over the Haar measure on the unitary
//! group `U(d)`: Weingarten calculus, moment operators, symmetric-subspace
//! projectors, unitary/state `k`-design certification, twirling and fidelity
//! estimation, concentration bounds, and classical-shadow tomography — all at
//! "desk scale" (small `d` and `k`, dense matrices, exact answers you can
//! check against closed forms).
//!
//! See the `examples/` directory for runnable tours of each capability.

pub mod applications;
pub mod cli;
pub mod core_linalg;
pub mod designs;
pub mod ensembles;
pub mod error;
pub mod perm_algebra;
pub mod report;
pub mod shadows;
mod stats;
pub mod subspaces;
pub mod weingarten;

pub use error::{Error, Result};
pub use num_complex::Complex64;
