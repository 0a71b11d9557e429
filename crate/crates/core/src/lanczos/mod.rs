//! Lanczos-type block Krylov approximations of `φ(L)·E_W`.
//!
//! All three schemes run `m` block iterations (`m·N` matrix-vector products)
//! and return the degree `m − 1` polynomial approximant. A breakdown (the
//! next Krylov block is numerically rank deficient) truncates the iteration:
//! the basis then spans an invariant subspace and the approximant is exact.

pub mod classical;
pub mod global;
pub mod sequential;

pub use classical::{classical_block_lanczos, ClassicalFactorization};
pub use global::{global_block_lanczos, GlobalFactorization};
pub use sequential::{sequential_lanczos_approximate, SequentialResult};

use crate::error::{Error, Result};
use crate::kernel::KernelFunction;
use crate::linalg::{sym_eig, DenseMatrix};

/// Knobs shared by the Lanczos iterations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LanczosOptions {
    /// Re-orthogonalize every new block against the whole basis (two passes).
    /// Off by default; the plain three-term recurrence is used.
    pub reorthogonalize: bool,
}

pub(crate) fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidInput(
            "number of iterations m must be >= 1".into(),
        ));
    }
    Ok(())
}

/// `φ(H)·B` for symmetric `H`, with eigenvalues checked against `[0, Λ]`.
pub(crate) fn phi_times(
    h: &DenseMatrix,
    b: &DenseMatrix,
    phi: &KernelFunction,
    lambda_max: f64,
) -> Result<DenseMatrix> {
    sym_eig(h)?.apply_function_to(|l| phi.eval_checked(l, lambda_max), b)
}

/// Symmetric tridiagonal matrix from its diagonal and off-diagonal.
pub(crate) fn tridiagonal(alpha: &[f64], beta: &[f64]) -> DenseMatrix {
    let m = alpha.len();
    let mut h = DenseMatrix::from_diag(alpha);
    for k in 0..m.saturating_sub(1) {
        h[(k + 1, k)] = beta[k];
        h[(k, k + 1)] = beta[k];
    }
    h
}
