use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Dense `n × N` block of graph signals (one column per sampling node).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector(DenseMatrix);

impl BlockVector {
    pub fn zeros(n: usize, width: usize) -> Self {
        Self(DenseMatrix::zeros(n, width))
    }

    pub fn from_matrix(m: DenseMatrix) -> Self {
        Self(m)
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.0
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.0
    }

    /// Graph size `n`.
    pub fn n(&self) -> usize {
        self.0.rows()
    }

    /// Block width `N`.
    pub fn width(&self) -> usize {
        self.0.cols()
    }

    /// Rows at `nodes`, i.e. `E_Wᵀ · self` for the unit block of `nodes`.
    pub fn rows_at(&self, nodes: &[usize]) -> DenseMatrix {
        DenseMatrix::from_fn(nodes.len(), self.width(), |i, j| self.0[(nodes[i], j)])
    }

    /// `self · c` for a coefficient vector of length `N`.
    pub fn combine(&self, c: &[f64]) -> Result<Vec<f64>> {
        self.0.matvec(c)
    }

    /// Largest absolute entry.
    pub fn uniform_norm(&self) -> f64 {
        self.0.max_abs()
    }
}

impl Deref for BlockVector {
    type Target = DenseMatrix;

    fn deref(&self) -> &DenseMatrix {
        &self.0
    }
}

impl DerefMut for BlockVector {
    fn deref_mut(&mut self) -> &mut DenseMatrix {
        &mut self.0
    }
}

impl From<DenseMatrix> for BlockVector {
    fn from(m: DenseMatrix) -> Self {
        Self(m)
    }
}

/// Tallies of length-`n` vector operations: matrix-vector products, inner
/// products and scaled additions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounters {
    pub mv: u64,
    pub dot: u64,
    pub axpy: u64,
}

impl OpCounters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_mv(&mut self, k: usize) {
        self.mv += k as u64;
    }

    pub fn add_dot(&mut self, k: usize) {
        self.dot += k as u64;
    }

    pub fn add_axpy(&mut self, k: usize) {
        self.axpy += k as u64;
    }

    /// Counts accumulated since `earlier`.
    pub fn since(&self, earlier: &OpCounters) -> OpCounters {
        OpCounters {
            mv: self.mv - earlier.mv,
            dot: self.dot - earlier.dot,
            axpy: self.axpy - earlier.axpy,
        }
    }
}

/// Unit block `E_W`: column `i` is the canonical basis vector of `nodes[i]`.
pub fn unit_block(nodes: &[usize], n: usize) -> Result<BlockVector> {
    let mut seen = vec![false; n];
    let mut e = DenseMatrix::zeros(n, nodes.len());
    for (col, &w) in nodes.iter().enumerate() {
        if w >= n {
            return Err(Error::IndexOutOfRange { index: w, n });
        }
        if std::mem::replace(&mut seen[w], true) {
            return Err(Error::DuplicateNode(w));
        }
        e[(w, col)] = 1.0;
    }
    Ok(BlockVector(e))
}
