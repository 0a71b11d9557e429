//! Classical block Lanczos: block-tridiagonal projection `H_m = [Q]ᵀ L [Q]`.

use crate::error::{Error, Result};
use crate::graph::{BlockVector, OpCounters, SparseSymMatrix};
use crate::kernel::KernelFunction;
use crate::linalg::{axpy, dot, reduced_qr_with_scale, sym_eig, DenseMatrix, TOL_RANK};

use super::{check_m, phi_times, LanczosOptions};

/// Orthonormal block basis `Q_1..Q_m` with the block-tridiagonal `H_m`.
#[derive(Debug, Clone)]
pub struct ClassicalFactorization {
    blocks: Vec<DenseMatrix>,
    h: DenseMatrix,
    next_block: Option<DenseMatrix>,
    next_coupling: Option<DenseMatrix>,
    requested_m: usize,
    lambda_max: f64,
}

/// Runs `m` iterations of classical block Lanczos started at `E_W`
/// (columns must be orthonormal).
pub fn classical_block_lanczos(
    l: &SparseSymMatrix,
    e_w: &BlockVector,
    m: usize,
    opts: LanczosOptions,
    counters: &mut OpCounters,
) -> Result<ClassicalFactorization> {
    check_m(m)?;
    let n = l.n();
    let nb = e_w.width();
    if e_w.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: e_w.n(),
        });
    }
    if nb == 0 || nb > n {
        return Err(Error::InvalidInput(format!(
            "block width must be in 1..={n}, got {nb}"
        )));
    }
    let gram = e_w.t_matmul(e_w)?;
    let mut eye = gram.clone();
    eye.shift_diagonal(-1.0);
    if eye.max_abs() > 1e-12 {
        return Err(Error::InvalidInput(
            "starting block must have orthonormal columns".into(),
        ));
    }

    let mut blocks: Vec<DenseMatrix> = vec![e_w.matrix().clone()];
    let mut diag: Vec<DenseMatrix> = Vec::new();
    // sub[k] = H_{k+2,k+1} (upper triangular, or upper staircase after a
    // deflation).
    let mut sub: Vec<DenseMatrix> = Vec::new();
    let mut next_block = None;
    let mut next_coupling = None;

    for k in 0..m {
        let qk = &blocks[k];
        let p = qk.cols();
        let lq = l.spmv_block(&BlockVector::from_matrix(qk.clone()), counters)?;
        let scale = lq.frobenius_norm();
        let mut x = lq.into_matrix();
        if k > 0 {
            let prev = blocks[k - 1].matmul(&sub[k - 1].transpose())?;
            x = x.sub(&prev)?;
            counters.add_axpy(p * blocks[k - 1].cols());
        }
        let mut hkk = qk.t_matmul(&x)?;
        counters.add_dot(p * p);
        hkk.symmetrize();
        x = x.sub(&qk.matmul(&hkk)?)?;
        counters.add_axpy(p * p);

        if opts.reorthogonalize {
            for _ in 0..2 {
                for q in &blocks {
                    let c = q.t_matmul(&x)?;
                    x = x.sub(&q.matmul(&c)?)?;
                    counters.add_dot(p * q.cols());
                    counters.add_axpy(p * q.cols());
                }
            }
        }
        diag.push(hkk);

        let qr = reduced_qr_with_scale(&x, scale);
        counters.add_dot(p * (p + 1) / 2 + p * p);
        counters.add_axpy(p * (p - 1) / 2 + p * p);
        let (q, r) = if qr.deficient {
            // Keep the directions that are still new; the block is exhausted
            // (an invariant subspace) when none are left.
            match deflate(&x, scale, counters) {
                Some(qr) => qr,
                None => break,
            }
        } else {
            (qr.q, qr.r)
        };
        if k + 1 == m {
            next_block = Some(q);
            next_coupling = Some(r);
        } else {
            blocks.push(q);
            sub.push(r);
        }
    }

    let em = blocks.len();
    let offsets = block_offsets(&blocks);
    let dim = offsets[em];
    let mut h = DenseMatrix::zeros(dim, dim);
    for (k, d) in diag.iter().enumerate().take(em) {
        let o = offsets[k];
        for j in 0..d.cols() {
            for i in 0..d.rows() {
                h[(o + i, o + j)] = d[(i, j)];
            }
        }
    }
    for (k, s) in sub.iter().enumerate() {
        let (oc, or) = (offsets[k], offsets[k + 1]);
        for j in 0..s.cols() {
            for i in 0..s.rows() {
                h[(or + i, oc + j)] = s[(i, j)];
                h[(oc + j, or + i)] = s[(i, j)];
            }
        }
    }

    Ok(ClassicalFactorization {
        blocks,
        h,
        next_block,
        next_coupling,
        requested_m: m,
        lambda_max: l.spectral_upper_bound(),
    })
}

/// Column offsets of the blocks inside `[Q_1..Q_m]`, with the total last.
fn block_offsets(blocks: &[DenseMatrix]) -> Vec<usize> {
    let mut out = Vec::with_capacity(blocks.len() + 1);
    let mut acc = 0;
    out.push(0);
    for b in blocks {
        acc += b.cols();
        out.push(acc);
    }
    out
}

/// Rank-revealing orthonormalization of a residual block by Gram-Schmidt
/// (two passes per column). Columns whose new part falls below
/// `TOL_RANK · scale` are dropped. Returns `Q` (`n × p`) and the `p × N`
/// coupling `C` with `X ≈ Q·C`, or `None` when nothing is left.
fn deflate(
    x: &DenseMatrix,
    scale: f64,
    counters: &mut OpCounters,
) -> Option<(DenseMatrix, DenseMatrix)> {
    let n = x.rows();
    let nc = x.cols();
    let threshold = TOL_RANK * scale;
    let mut kept: Vec<Vec<f64>> = Vec::new();
    // coupling[j] holds the coefficients of column j on the kept vectors.
    let mut coupling: Vec<Vec<f64>> = Vec::with_capacity(nc);
    for j in 0..nc {
        let mut v = x.col(j).to_vec();
        let mut coef = vec![0.0; kept.len()];
        for _ in 0..2 {
            for (c, q) in coef.iter_mut().zip(&kept) {
                let s = dot(q, &v);
                axpy(-s, q, &mut v);
                *c += s;
            }
            counters.add_dot(kept.len());
            counters.add_axpy(kept.len());
        }
        let norm = dot(&v, &v).sqrt();
        counters.add_dot(1);
        if norm >= threshold && scale > 0.0 {
            v.iter_mut().for_each(|vi| *vi /= norm);
            kept.push(v);
            coef.push(norm);
        }
        coupling.push(coef);
    }
    if kept.is_empty() {
        return None;
    }
    let p = kept.len();
    let q = DenseMatrix::from_fn(n, p, |i, j| kept[j][i]);
    let c = DenseMatrix::from_fn(p, nc, |i, j| coupling[j].get(i).copied().unwrap_or(0.0));
    Some((q, c))
}

impl ClassicalFactorization {
    pub fn width(&self) -> usize {
        self.blocks[0].cols()
    }

    pub fn n(&self) -> usize {
        self.blocks[0].rows()
    }

    /// Number of columns of each basis block; they shrink after a deflation.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(DenseMatrix::cols).collect()
    }

    /// Number of blocks actually built (`< requested_m` after a breakdown).
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

    /// `[Q_1, ..., Q_m]` as one `n × mN` matrix.
    pub fn basis(&self) -> DenseMatrix {
        let refs: Vec<&DenseMatrix> = self.blocks.iter().collect();
        DenseMatrix::hcat(&refs).expect("blocks share their row count")
    }

    /// Block-tridiagonal `H_m` (`mN × mN` unless a block was deflated).
    pub fn h(&self) -> &DenseMatrix {
        &self.h
    }

    /// `Q_{m+1}` and `H_{m+1,m}`; absent after a breakdown.
    pub fn next(&self) -> Option<(&DenseMatrix, &DenseMatrix)> {
        self.next_block.as_ref().zip(self.next_coupling.as_ref())
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    /// `‖[Q]ᵀ[Q] − I‖_F`.
    pub fn orthogonality_defect(&self) -> f64 {
        let q = self.basis();
        let mut g = q.t_matmul(&q).expect("square");
        g.shift_diagonal(-1.0);
        g.frobenius_norm()
    }

    /// `‖L[Q_1..Q_m] − [Q_1..Q_{m+1}]H̃_m‖_F`.
    pub fn relation_residual(&self, l: &SparseSymMatrix) -> Result<f64> {
        let q = self.basis();
        let mut scratch = OpCounters::new();
        let lq = l.spmv_block(&BlockVector::from_matrix(q.clone()), &mut scratch)?;
        let mut r = lq.into_matrix().sub(&q.matmul(&self.h)?)?;
        if let Some((qn, hn)) = self.next() {
            let tail = qn.matmul(hn)?;
            let off = self.h.rows() - tail.cols();
            for j in 0..tail.cols() {
                let col = r.col_mut(off + j);
                for (ri, ti) in col.iter_mut().zip(tail.col(j)) {
                    *ri -= ti;
                }
            }
        }
        Ok(r.frobenius_norm())
    }

    /// `φ(H_m)·F_1`, i.e. the first `N` columns of `φ(H_m)`.
    pub fn phi_h_first_columns(&self, phi: &KernelFunction) -> Result<DenseMatrix> {
        let d = self.h.rows();
        let f1 = DenseMatrix::from_fn(d, self.width(), |i, j| if i == j { 1.0 } else { 0.0 });
        phi_times(&self.h, &f1, phi, self.lambda_max)
    }

    /// `[Q_1..Q_m]·U` for an `mN × k` coefficient matrix `U`.
    pub fn expand(&self, u: &DenseMatrix, counters: &mut OpCounters) -> Result<BlockVector> {
        if u.rows() != self.h.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.h.rows(),
                found: u.rows(),
            });
        }
        let mut out = DenseMatrix::zeros(self.n(), u.cols());
        let offsets = block_offsets(&self.blocks);
        for (k, q) in self.blocks.iter().enumerate() {
            let o = offsets[k];
            let uk = DenseMatrix::from_fn(q.cols(), u.cols(), |i, j| u[(o + i, j)]);
            out = out.add(&q.matmul(&uk)?)?;
        }
        counters.add_axpy(self.h.rows() * u.cols());
        Ok(BlockVector::from_matrix(out))
    }

    /// Approximant `[Q_1..Q_m]·φ(H_m)·F_1` of `φ(L)·E_W`.
    pub fn approximate(
        &self,
        phi: &KernelFunction,
        counters: &mut OpCounters,
    ) -> Result<BlockVector> {
        let u = self.phi_h_first_columns(phi)?;
        self.expand(&u, counters)
    }

    /// `F_1ᵀ·φ(H_m)·F_1`, which equals `E_Wᵀ` times the approximant.
    /// Built from symmetric products, so the result is exactly symmetric.
    pub fn collocation(&self, phi: &KernelFunction) -> Result<DenseMatrix> {
        let eig = sym_eig(&self.h)?;
        let w = eig
            .eigenvalues
            .iter()
            .map(|&l| phi.eval_checked(l, self.lambda_max))
            .collect::<Result<Vec<f64>>>()?;
        let v = &eig.eigenvectors;
        let nb = self.width();
        let mut k = DenseMatrix::zeros(nb, nb);
        for j in 0..nb {
            for i in 0..=j {
                let s: f64 = w
                    .iter()
                    .enumerate()
                    .map(|(q, &wq)| (v[(i, q)] * v[(j, q)]) * wq)
                    .sum();
                k[(i, j)] = s;
                k[(j, i)] = s;
            }
        }
        Ok(k)
    }
}
