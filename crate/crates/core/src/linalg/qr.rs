use super::matrix::{axpy, dot, DenseMatrix};
use super::TOL_RANK;

/// Reduced QR factors of a tall matrix `X = Q R`.
#[derive(Debug, Clone)]
pub struct QrDecomposition {
    /// `n × N` with orthonormal columns.
    pub q: DenseMatrix,
    /// `N × N` upper triangular with non-negative diagonal.
    pub r: DenseMatrix,
    /// Set when some `|R_ii|` falls below the rank threshold.
    pub deficient: bool,
}

/// Householder reduced QR of an `n × N` matrix (`n ≥ N ≥ 1`).
///
/// The diagonal of `R` is made non-negative, which fixes the factorization
/// uniquely for full-rank input. Rank deficiency is judged relative to `‖X‖_F`;
/// a zero matrix is always deficient.
pub fn reduced_qr(x: &DenseMatrix) -> QrDecomposition {
    reduced_qr_with_scale(x, x.frobenius_norm())
}

/// Like [`reduced_qr`], but judges deficiency as `|R_ii| < TOL_RANK · scale`.
///
/// Krylov iterations pass the norm of `L·Q_k` here: the residual block itself
/// is tiny exactly when the Krylov space has become invariant.
pub fn reduced_qr_with_scale(x: &DenseMatrix, scale: f64) -> QrDecomposition {
    let n = x.rows();
    let nc = x.cols();
    assert!(n >= nc && nc >= 1, "reduced_qr needs n >= N >= 1");

    let mut r = x.clone();
    let mut reflectors: Vec<Option<Vec<f64>>> = Vec::with_capacity(nc);

    for j in 0..nc {
        let col = &r.col(j)[j..];
        let norm = dot(col, col).sqrt();
        if norm == 0.0 {
            reflectors.push(None);
            continue;
        }
        let alpha = if col[0] > 0.0 { -norm } else { norm };
        let mut v = col.to_vec();
        v[0] -= alpha;
        let vnorm = dot(&v, &v).sqrt();
        if vnorm == 0.0 {
            reflectors.push(None);
            continue;
        }
        v.iter_mut().for_each(|vi| *vi /= vnorm);
        for k in j..nc {
            let tail = &mut r.col_mut(k)[j..];
            let s = 2.0 * dot(&v, tail);
            axpy(-s, &v, tail);
        }
        // Exact zeros below the diagonal.
        for i in j + 1..n {
            r[(i, j)] = 0.0;
        }
        reflectors.push(Some(v));
    }

    let mut q = DenseMatrix::zeros(n, nc);
    for j in 0..nc {
        q[(j, j)] = 1.0;
    }
    for (j, v) in reflectors.iter().enumerate().rev() {
        if let Some(v) = v {
            for k in 0..nc {
                let tail = &mut q.col_mut(k)[j..];
                let s = 2.0 * dot(v, tail);
                axpy(-s, v, tail);
            }
        }
    }

    let mut r_small = r.leading(nc, nc);
    for j in 0..nc {
        if r_small[(j, j)] < 0.0 {
            for k in j..nc {
                r_small[(j, k)] = -r_small[(j, k)];
            }
            q.col_mut(j).iter_mut().for_each(|v| *v = -*v);
        }
    }

    let threshold = TOL_RANK * scale;
    let deficient = scale == 0.0 || (0..nc).any(|i| r_small[(i, i)].abs() < threshold);

    QrDecomposition {
        q,
        r: r_small,
        deficient,
    }
}
