//! Chebyshev–Lobatto interpolation of `φ` on `[0, Λ]` and its application to
//! blocks through the three-term recurrence.
//!
//! The interpolant is expanded in `T_k(1 − 2λ/Λ)`. Its nodes
//! `λ_j = (Λ/2)(1 − cos(πj/m))` map to `x_j = cos(πj/m)`, so the coefficients
//! come out of a type-I discrete cosine transform.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::graph::{BlockVector, OpCounters, SparseSymMatrix};
use crate::kernel::KernelFunction;
use crate::linalg::{axpy, DenseMatrix};

/// Coefficients `c_0..c_m` of a degree-`m` Chebyshev expansion on `[0, Λ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebCoefficients {
    coeffs: Vec<f64>,
    lambda_max: f64,
}

/// Lobatto nodes `λ_j = (Λ/2)(1 − cos(πj/m))`, `j = 0..=m`, ascending.
/// For `m = 0` the single node is the midpoint `Λ/2`.
pub fn lobatto_nodes(lambda_max: f64, m: usize) -> Vec<f64> {
    if m == 0 {
        return vec![0.5 * lambda_max];
    }
    (0..=m)
        .map(|j| 0.5 * lambda_max * (1.0 - (PI * j as f64 / m as f64).cos()))
        .collect()
}

fn check_lambda(lambda_max: f64) -> Result<()> {
    if !(lambda_max > 0.0 && lambda_max.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "spectral bound must be positive, got {lambda_max}"
        )));
    }
    Ok(())
}

impl ChebCoefficients {
    /// Interpolant through `values[j]` at the Lobatto nodes of degree
    /// `values.len() − 1`.
    pub fn from_node_values(values: &[f64], lambda_max: f64) -> Result<Self> {
        check_lambda(lambda_max)?;
        if values.is_empty() {
            return Err(Error::InvalidInput("need at least one node value".into()));
        }
        let m = values.len() - 1;
        if m == 0 {
            return Ok(Self {
                coeffs: vec![values[0]],
                lambda_max,
            });
        }
        let mf = m as f64;
        let coeffs = (0..=m)
            .map(|k| {
                let mut s = 0.0;
                for (j, &f) in values.iter().enumerate() {
                    let w = if j == 0 || j == m { 0.5 } else { 1.0 };
                    // cos(πjk/m) with the argument reduced mod 2m for accuracy.
                    let r = (j * k) % (2 * m);
                    s += w * f * (PI * r as f64 / mf).cos();
                }
                let half = if k == 0 || k == m { 0.5 } else { 1.0 };
                half * 2.0 / mf * s
            })
            .collect();
        Ok(Self { coeffs, lambda_max })
    }

    pub fn from_coefficients(coeffs: Vec<f64>, lambda_max: f64) -> Result<Self> {
        check_lambda(lambda_max)?;
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("need at least one coefficient".into()));
        }
        Ok(Self { coeffs, lambda_max })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    /// Clenshaw evaluation without a domain check.
    pub fn eval_unchecked(&self, lambda: f64) -> f64 {
        let x = 1.0 - 2.0 * lambda / self.lambda_max;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + self.coeffs[0]
    }

    /// `Σ c_k T_k(1 − 2λ/Λ)` for `λ ∈ [0, Λ]`.
    pub fn eval(&self, lambda: f64) -> Result<f64> {
        let margin = crate::kernel::TOL_SPEC * self.lambda_max.max(1.0);
        if !(lambda >= -margin && lambda <= self.lambda_max + margin) {
            return Err(Error::DomainError {
                value: lambda,
                upper: self.lambda_max,
            });
        }
        Ok(self.eval_unchecked(lambda))
    }
}

/// Degree-`m` Chebyshev–Lobatto interpolant of `φ` on `[0, Λ]`.
pub fn cheb_coefficients(
    phi: &KernelFunction,
    lambda_max: f64,
    m: usize,
) -> Result<ChebCoefficients> {
    check_lambda(lambda_max)?;
    let values = lobatto_nodes(lambda_max, m)
        .into_iter()
        .map(|l| phi.eval(l))
        .collect::<Vec<_>>();
    ChebCoefficients::from_node_values(&values, lambda_max)
}

/// Degree-`m` interpolant of `√φ`; fails if `φ` is negative at a node.
pub fn sqrt_cheb_coefficients(
    phi: &KernelFunction,
    lambda_max: f64,
    m: usize,
) -> Result<ChebCoefficients> {
    check_lambda(lambda_max)?;
    let values = lobatto_nodes(lambda_max, m)
        .into_iter()
        .map(|l| {
            let v = phi.eval(l);
            if v >= 0.0 {
                Ok(v.sqrt())
            } else {
                Err(Error::NegativePhiAtNode { node: l, value: v })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ChebCoefficients::from_node_values(&values, lambda_max)
}

/// `Σ_k c_k T_k(I − (2/Λ)L)·E` by the forward recurrence, keeping two
/// iterates. Costs `deg·N` matrix-vector products.
pub fn cheb_apply(
    l: &SparseSymMatrix,
    e: &BlockVector,
    c: &ChebCoefficients,
    counters: &mut OpCounters,
) -> Result<BlockVector> {
    if e.n() != l.n() {
        return Err(Error::DimensionMismatch {
            expected: l.n(),
            found: e.n(),
        });
    }
    let nb = e.width();
    let scale = 2.0 / c.lambda_max;
    // y = (I − (2/Λ)L)·x
    let shifted = |x: &BlockVector, counters: &mut OpCounters| -> Result<DenseMatrix> {
        let mut y = x.matrix().clone();
        let lx = l.spmv_block(x, counters)?;
        axpy(-scale, lx.as_slice(), y.as_mut_slice());
        Ok(y)
    };

    let coeffs = c.coefficients();
    let mut acc = e.scaled(coeffs[0]);
    counters.add_axpy(nb);
    if coeffs.len() == 1 {
        return Ok(BlockVector::from_matrix(acc));
    }
    let mut prev = e.matrix().clone();
    let mut cur = shifted(e, counters)?;
    counters.add_axpy(nb);
    axpy(coeffs[1], cur.as_slice(), acc.as_mut_slice());
    counters.add_axpy(nb);
    for &ck in &coeffs[2..] {
        let y = shifted(&BlockVector::from_matrix(cur.clone()), counters)?;
        // next = 2y − prev
        let mut next = prev;
        for (nv, yv) in next.as_mut_slice().iter_mut().zip(y.as_slice()) {
            *nv = 2.0 * yv - *nv;
        }
        counters.add_axpy(2 * nb);
        axpy(ck, next.as_slice(), acc.as_mut_slice());
        counters.add_axpy(nb);
        prev = cur;
        cur = next;
    }
    Ok(BlockVector::from_matrix(acc))
}

/// `p_q(L)·(p_q(L)·E)` with `p_q` the degree-`⌊m/2⌋` interpolant of `√φ`.
/// The implied kernel `p_q(L)²` is positive semidefinite.
pub fn cheb_squared_apply(
    l: &SparseSymMatrix,
    e: &BlockVector,
    phi: &KernelFunction,
    lambda_max: f64,
    m: usize,
    counters: &mut OpCounters,
) -> Result<BlockVector> {
    let q = sqrt_cheb_coefficients(phi, lambda_max, m / 2)?;
    let once = cheb_apply(l, e, &q, counters)?;
    cheb_apply(l, &once, &q, counters)
}
