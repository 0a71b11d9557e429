use super::matrix::DenseMatrix;
use super::TOL_SYM;
use crate::error::{Error, Result};

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymEigDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: DenseMatrix,
}

impl SymEigDecomposition {
    /// `V · diag(f(λ)) · Vᵀ`.
    pub fn apply_function<F>(&self, mut f: F) -> Result<DenseMatrix>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let d = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let weights = self
            .eigenvalues
            .iter()
            .map(|&l| f(l))
            .collect::<Result<Vec<f64>>>()?;
        let mut out = DenseMatrix::zeros(d, d);
        for j in 0..d {
            for i in 0..=j {
                let mut s = 0.0;
                for (k, &w) in weights.iter().enumerate() {
                    s += v[(i, k)] * w * v[(j, k)];
                }
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        Ok(out)
    }

    /// `V · diag(f(λ)) · Vᵀ · B` without forming the full `d × d` function.
    pub fn apply_function_to<F>(&self, mut f: F, b: &DenseMatrix) -> Result<DenseMatrix>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let weights = self
            .eigenvalues
            .iter()
            .map(|&l| f(l))
            .collect::<Result<Vec<f64>>>()?;
        let mut coeffs = self.eigenvectors.t_matmul(b)?;
        for j in 0..coeffs.cols() {
            for (k, &w) in weights.iter().enumerate() {
                coeffs[(k, j)] *= w;
            }
        }
        self.eigenvectors.matmul(&coeffs)
    }
}

/// Symmetric eigendecomposition by Householder tridiagonalization followed by
/// the implicit-shift QL iteration.
pub fn sym_eig(s: &DenseMatrix) -> Result<SymEigDecomposition> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch {
            expected: s.rows(),
            found: s.cols(),
        });
    }
    let norm = s.frobenius_norm();
    let defect = s.symmetry_defect();
    if defect > TOL_SYM * norm {
        return Err(Error::NotSymmetric { defect });
    }
    let n = s.rows();
    if n == 0 {
        return Ok(SymEigDecomposition {
            eigenvalues: vec![],
            eigenvectors: DenseMatrix::zeros(0, 0),
        });
    }
    let mut sym = s.clone();
    sym.symmetrize();
    let mut v = sym.into_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut v, &mut d, &mut e);
    tql2(n, &mut v, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eigenvalues = order.iter().map(|&i| d[i]).collect();
    let mut vecs = DenseMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.col_mut(dst)
            .copy_from_slice(&v[src * n..(src + 1) * n]);
    }
    Ok(SymEigDecomposition {
        eigenvalues,
        eigenvectors: vecs,
    })
}

/// `f(S)` for symmetric `S` through its spectral decomposition. The closure
/// is responsible for rejecting eigenvalues outside its domain.
pub fn matrix_function<F>(s: &DenseMatrix, f: F) -> Result<DenseMatrix>
where
    F: FnMut(f64) -> Result<f64>,
{
    sym_eig(s)?.apply_function(f)
}

// Column-major accessor: element (row r, col c).
macro_rules! at {
    ($v:expr, $n:expr, $r:expr, $c:expr) => {
        $v[($c) * $n + ($r)]
    };
}

/// Householder reduction to tridiagonal form (EISPACK tred2 lineage).
/// On exit `d` holds the diagonal, `e[1..]` the subdiagonal and `v` the
/// accumulated orthogonal transformation.
fn tred2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    for j in 0..n {
        d[j] = at!(v, n, n - 1, j);
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = at!(v, n, i - 1, j);
                at!(v, n, i, j) = 0.0;
                at!(v, n, j, i) = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                at!(v, n, j, i) = f;
                g = e[j] + at!(v, n, j, j) * f;
                for k in j + 1..i {
                    g += at!(v, n, k, j) * d[k];
                    e[k] += at!(v, n, k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    at!(v, n, k, j) -= f * e[k] + g * d[k];
                }
                d[j] = at!(v, n, i - 1, j);
                at!(v, n, i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        at!(v, n, n - 1, i) = at!(v, n, i, i);
        at!(v, n, i, i) = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = at!(v, n, k, i + 1) / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += at!(v, n, k, i + 1) * at!(v, n, k, j);
                }
                for k in 0..=i {
                    at!(v, n, k, j) -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            at!(v, n, k, i + 1) = 0.0;
        }
    }
    for j in 0..n {
        d[j] = at!(v, n, n - 1, j);
        at!(v, n, n - 1, j) = 0.0;
    }
    at!(v, n, n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL iteration on the tridiagonal matrix from [`tred2`].
fn tql2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 64 {
                    return Err(Error::NoConvergence);
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (left, right) = v.split_at_mut((i + 1) * n);
                    let col_i = &mut left[i * n..];
                    let col_i1 = &mut right[..n];
                    for k in 0..n {
                        let hk = col_i1[k];
                        col_i1[k] = s * col_i[k] + c * hk;
                        col_i[k] = c * col_i[k] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
