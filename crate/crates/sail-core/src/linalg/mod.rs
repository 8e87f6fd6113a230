//! Self-contained dense and banded linear algebra.
//!
//! The solvers in this crate need exactly four kernels: a dense column-major
//! matrix with LU, a thin Householder QR, a one-sided Jacobi SVD, and a
//! banded LU/Cholesky pair for the finite-difference systems. All of them are
//! generic over [`crate::scalar::Scalar`].

mod banded;
mod csr;
mod dense;
mod svd;

pub use banded::{BandedCholesky, BandedLu, BandedMatrix};
pub use csr::CsrMatrix;
pub use dense::DenseMatrix;
pub use svd::{svd, SvdResult};
