//! Global block Lanczos: Krylov blocks orthonormal in the Frobenius inner
//! product, scalar tridiagonal `H_m`.

use crate::error::{Error, Result};
use crate::graph::{BlockVector, OpCounters, SparseSymMatrix};
use crate::kernel::KernelFunction;
use crate::linalg::{dot, DenseMatrix, TOL_RANK};

use super::{check_m, phi_times, tridiagonal, LanczosOptions};

/// Frobenius-orthonormal blocks with tridiagonal coefficients.
#[derive(Debug, Clone)]
pub struct GlobalFactorization {
    blocks: Vec<DenseMatrix>,
    alpha: Vec<f64>,
    /// `beta[k] = h_{k+2,k+1}`; one entry longer than the basis coupling when
    /// the iteration did not break down.
    beta: Vec<f64>,
    start_norm: f64,
    next_block: Option<DenseMatrix>,
    requested_m: usize,
    lambda_max: f64,
}

/// Runs `m` iterations of global block Lanczos started at `E_W / ‖E_W‖_F`.
pub fn global_block_lanczos(
    l: &SparseSymMatrix,
    e_w: &BlockVector,
    m: usize,
    opts: LanczosOptions,
    counters: &mut OpCounters,
) -> Result<GlobalFactorization> {
    check_m(m)?;
    if e_w.n() != l.n() {
        return Err(Error::DimensionMismatch {
            expected: l.n(),
            found: e_w.n(),
        });
    }
    let nb = e_w.width();
    let start_norm = e_w.frobenius_norm();
    if nb == 0 || start_norm == 0.0 {
        return Err(Error::InvalidInput("starting block must be nonzero".into()));
    }

    let mut blocks = vec![e_w.scaled(1.0 / start_norm)];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut next_block = None;

    for k in 0..m {
        let qk = &blocks[k];
        let lq = l.spmv_block(&BlockVector::from_matrix(qk.clone()), counters)?;
        let scale = lq.frobenius_norm();
        let mut x = lq.into_matrix();
        if k > 0 {
            axpy_mat(-beta[k - 1], &blocks[k - 1], &mut x);
            counters.add_axpy(nb);
        }
        let a = frob_dot(qk, &x);
        counters.add_dot(nb);
        axpy_mat(-a, qk, &mut x);
        counters.add_axpy(nb);
        alpha.push(a);

        if opts.reorthogonalize {
            for _ in 0..2 {
                for q in &blocks {
                    let c = frob_dot(q, &x);
                    axpy_mat(-c, q, &mut x);
                    counters.add_dot(nb);
                    counters.add_axpy(nb);
                }
            }
        }

        let b = x.frobenius_norm();
        counters.add_dot(nb);
        if !(b >= TOL_RANK * scale) || b == 0.0 {
            break;
        }
        let q_next = x.scaled(1.0 / b);
        counters.add_axpy(nb);
        beta.push(b);
        if k + 1 == m {
            next_block = Some(q_next);
        } else {
            blocks.push(q_next);
        }
    }

    Ok(GlobalFactorization {
        blocks,
        alpha,
        beta,
        start_norm,
        next_block,
        requested_m: m,
        lambda_max: l.spectral_upper_bound(),
    })
}

fn frob_dot(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    dot(a.as_slice(), b.as_slice())
}

fn axpy_mat(alpha: f64, x: &DenseMatrix, y: &mut DenseMatrix) {
    for (yi, xi) in y.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *yi += alpha * xi;
    }
}

impl GlobalFactorization {
    pub fn effective_m(&self) -> usize {
        self.blocks.len()
    }

    pub fn requested_m(&self) -> usize {
        self.requested_m
    }

    pub fn broke_down(&self) -> bool {
        self.effective_m() < self.requested_m
    }

    pub fn blocks(&self) -> &[DenseMatrix] {
        &self.blocks
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.alpha
    }

    /// Off-diagonal `h_{k+1,k}`, including `h_{m+1,m}` when present.
    pub fn off_diagonal(&self) -> &[f64] {
        &self.beta
    }

    pub fn next_block(&self) -> Option<&DenseMatrix> {
        self.next_block.as_ref()
    }

    /// Tridiagonal `H_m` (`m × m`).
    pub fn h(&self) -> DenseMatrix {
        tridiagonal(&self.alpha, &self.beta)
    }

    /// Coefficients `u = ‖E_W‖_F · φ(H_m) · e_1`.
    pub fn coefficients(&self, phi: &KernelFunction) -> Result<Vec<f64>> {
        let m = self.effective_m();
        let e1 = DenseMatrix::from_fn(m, 1, |i, _| if i == 0 { self.start_norm } else { 0.0 });
        Ok(phi_times(&self.h(), &e1, phi, self.lambda_max)?.into_vec())
    }

    /// Approximant `Σ_k u_k Q_k` of `φ(L)·E_W`.
    pub fn approximate(
        &self,
        phi: &KernelFunction,
        counters: &mut OpCounters,
    ) -> Result<BlockVector> {
        let u = self.coefficients(phi)?;
        let q0 = &self.blocks[0];
        let mut out = DenseMatrix::zeros(q0.rows(), q0.cols());
        for (uk, q) in u.iter().zip(&self.blocks) {
            axpy_mat(*uk, q, &mut out);
        }
        counters.add_axpy(u.len() * q0.cols());
        Ok(BlockVector::from_matrix(out))
    }
}
