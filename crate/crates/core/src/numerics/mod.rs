//! Dense complex matrix kernels: truncated SVD, small dense
//! eigendecomposition, Moore–Penrose left inverse, radix-2 FFT, and norms.
//!
//! Everything here is a pure function on immutable inputs, works in 64-bit
//! complex arithmetic, and is deterministic for identical input bits.

use thiserror::Error;

pub mod eig;
pub mod fft;
pub mod linsolve;
pub mod matrix;
pub mod svd;

pub use eig::{eig_dense, EigenPairs};
pub use fft::{fft, inverse_fft};
pub use linsolve::lu_solve;
pub use matrix::{vec_diff_norm, vec_norm, DenseMatrix};
pub use svd::{left_pinv, svd, truncated_svd, SvdTruncation};

/// Errors from the matrix kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("matrix is numerically zero")]
    ZeroMatrix,
    #[error("matrix contains NaN or Inf entries")]
    NonFinite,
    #[error("eigensolver did not converge within {iterations} QR iterations")]
    NoConvergence { iterations: usize },
    #[error("matrix is rank deficient: sigma_min = {sigma_min:e}, sigma_max = {sigma_max:e}")]
    RankDeficient { sigma_min: f64, sigma_max: f64 },
    #[error("length {0} is not a power of two")]
    BadLength(usize),
    #[error("shape error: {0}")]
    ShapeError(String),
}
