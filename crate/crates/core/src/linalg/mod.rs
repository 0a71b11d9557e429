//! Small dense linear algebra: reduced QR, symmetric eigendecomposition,
//! functional calculus, pivoted solves and general eigenvalues.
//!
//! Everything here operates on [`DenseMatrix`], a column-major `f64` matrix.
//! The sizes involved are the Lanczos matrices `H_m` (at most `mN × mN`),
//! collocation matrices (`N × N`) and, for the dense oracle, the full Laplacian.

mod general_eig;
mod matrix;
mod qr;
mod solve;
mod sym_eig;

pub use general_eig::{general_eigenvalues, GENERAL_EIG_MAX_DIM};
pub use matrix::DenseMatrix;
pub(crate) use matrix::{axpy, dot};
pub use qr::{reduced_qr, reduced_qr_with_scale, QrDecomposition};
pub use solve::solve_linear;
pub use sym_eig::{matrix_function, sym_eig, SymEigDecomposition};

/// Relative tolerance for QR and eigendecomposition round trips.
pub const TOL_QR: f64 = 1e-12;
pub const TOL_EIG: f64 = 1e-12;
/// Relative threshold below which a pivot or `R_ii` counts as rank deficient.
pub const TOL_RANK: f64 = 1e-10;
/// Relative symmetry defect accepted by [`sym_eig`].
pub const TOL_SYM: f64 = 1e-12;
