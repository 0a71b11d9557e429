use super::matrix::DenseMatrix;
use super::TOL_RANK;
use crate::error::{Error, Result};

/// Solves `A X = B` by LU factorization with partial pivoting.
///
/// `A` may be indefinite. A pivot below `TOL_RANK · ‖A‖_F` is reported as
/// [`Error::Singular`].
pub fn solve_linear(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.cols(),
        });
    }
    if b.rows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.rows(),
        });
    }
    let threshold = TOL_RANK * a.frobenius_norm();
    let mut lu = a.clone();
    let mut x = b.clone();

    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|i| (i, lu[(i, k)]))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("non-empty pivot range");
        if pivot.abs() <= threshold || pivot == 0.0 {
            return Err(Error::Singular { pivot: pivot.abs() });
        }
        if p != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = t;
            }
            for j in 0..x.cols() {
                let t = x[(k, j)];
                x[(k, j)] = x[(p, j)];
                x[(p, j)] = t;
            }
        }
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            if factor == 0.0 {
                continue;
            }
            for j in k + 1..n {
                lu[(i, j)] -= factor * lu[(k, j)];
            }
            for j in 0..x.cols() {
                x[(i, j)] -= factor * x[(k, j)];
            }
        }
    }

    for j in 0..x.cols() {
        for i in (0..n).rev() {
            let mut s = x[(i, j)];
            for k in i + 1..n {
                s -= lu[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = s / lu[(i, i)];
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_solve() {
        let b = DenseMatrix::from_rows(&[&[1.5, -2.0], &[3.0, 0.25]]);
        let x = solve_linear(&DenseMatrix::identity(2), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_solve() {
        let a = DenseMatrix::from_diag(&[2.0, 4.0]);
        let b = DenseMatrix::from_rows(&[&[1.0], &[1.0]]);
        let x = solve_linear(&a, &b).unwrap();
        assert_eq!(x.col(0), &[0.5, 0.25]);
    }

    #[test]
    fn singular_is_reported() {
        let a = DenseMatrix::from_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let b = DenseMatrix::from_rows(&[&[1.0], &[0.0]]);
        assert!(matches!(solve_linear(&a, &b), Err(Error::Singular { .. })));
    }

    #[test]
    fn indefinite_random_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1usize, 3, 8, 30] {
            let a = DenseMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let b = DenseMatrix::from_fn(n, 2, |_, _| rng.gen_range(-1.0..1.0));
            let x = solve_linear(&a, &b).unwrap();
            let resid = a.matmul(&x).unwrap().sub(&b).unwrap().frobenius_norm();
            assert!(resid <= 1e-12 * a.frobenius_norm() * x.frobenius_norm());
        }
    }
}
