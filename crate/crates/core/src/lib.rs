//! Dynamic mode decomposition for parabolic PDE trajectories, with computable
//! a-posteriori bounds on the extrapolation error.

#![allow(clippy::needless_range_loop)]
//!
//! The crate is organized around the pipeline of the benchmark CLI:
//!
//! * [`numerics`] — dense complex kernels (truncated SVD, small dense
//!   eigendecomposition, left pseudo-inverse, FFT, norms);
//! * [`solvers`] — fully resolved reference solvers for the four test
//!   problems;
//! * [`snapshots`] — snapshot matrices, observable lifting, subsampling, and
//!   trajectory serialization;
//! * [`dmd`] — model fitting on state or observable space and iteration-free
//!   prediction;
//! * [`error_analysis`] — local truncation errors, the ε_m surrogate, and the
//!   global extrapolation bound;
//! * [`pod_deim`] — the POD-Galerkin + DEIM baseline used for accuracy/cost
//!   comparisons.

pub mod dmd;
pub mod error_analysis;
pub mod numerics;
pub mod pod_deim;
pub mod snapshots;
pub mod solvers;
