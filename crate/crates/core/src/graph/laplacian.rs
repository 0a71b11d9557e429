use serde::{Deserialize, Serialize};

use super::block::{BlockVector, OpCounters};
use super::Graph;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LaplacianKind {
    /// `L = D − A`.
    Standard,
    /// `D^{-1/2}(D − A)D^{-1/2}`; isolated nodes give a zero row and column.
    Normalized,
}

impl std::str::FromStr for LaplacianKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Self::Standard),
            "normalized" => Ok(Self::Normalized),
            other => Err(Error::InvalidInput(format!(
                "unknown laplacian kind `{other}` (expected standard|normalized)"
            ))),
        }
    }
}

impl std::fmt::Display for LaplacianKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Standard => "standard",
            Self::Normalized => "normalized",
        })
    }
}

/// Symmetric sparse matrix in compressed sparse row form.
#[derive(Debug, Clone)]
pub struct SparseSymMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    kind: Option<LaplacianKind>,
}

impl SparseSymMatrix {
    /// Assembles from `(i, j, v)` triplets; duplicates are summed. The result
    /// must be symmetric in pattern and value.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { index: i.max(j), n });
            }
            rows[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in &mut rows {
            row.sort_by_key(|&(j, _)| j);
            let mut k = 0;
            while k < row.len() {
                let j = row[k].0;
                let mut v = 0.0;
                while k < row.len() && row[k].0 == j {
                    v += row[k].1;
                    k += 1;
                }
                col_idx.push(j);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        let m = Self {
            n,
            row_ptr,
            col_idx,
            values,
            kind: None,
        };
        for i in 0..n {
            for (j, v) in m.row(i) {
                if m.get(j, i) != v {
                    return Err(Error::NotSymmetric {
                        defect: (m.get(j, i) - v).abs(),
                    });
                }
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn kind(&self) -> Option<LaplacianKind> {
        self.kind
    }

    /// Stored `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[a..b]
            .iter()
            .copied()
            .zip(self.values[a..b].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        match self.col_idx[a..b].binary_search(&j) {
            Ok(k) => self.values[a + k],
            Err(_) => 0.0,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d[(i, j)] = v;
            }
        }
        d
    }

    /// `y = L x` for a single vector; not counted.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
            *yi = self.col_idx[a..b]
                .iter()
                .zip(&self.values[a..b])
                .map(|(&j, &v)| v * x[j])
                .sum();
        }
    }

    /// `L · X`, counting one matrix-vector product per column.
    pub fn spmv_block(&self, x: &BlockVector, counters: &mut OpCounters) -> Result<BlockVector> {
        if x.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.n(),
            });
        }
        let mut out = BlockVector::zeros(self.n, x.width());
        for j in 0..x.width() {
            self.apply(x.col(j), out.col_mut(j));
        }
        counters.add_mv(x.width());
        Ok(out)
    }

    /// Upper bound `Λ ≥ λ_max(L)`: exactly 2 for normalized Laplacians,
    /// otherwise the Gershgorin bound `max_i Σ_j |L_ij|`.
    pub fn spectral_upper_bound(&self) -> f64 {
        if self.kind == Some(LaplacianKind::Normalized) {
            return 2.0;
        }
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Assembles the standard or normalized Laplacian of `g`.
pub fn build_laplacian(g: &Graph, kind: LaplacianKind) -> SparseSymMatrix {
    let n = g.node_count();
    let deg = g.degrees();
    let scale: Vec<f64> = match kind {
        LaplacianKind::Standard => vec![1.0; n],
        LaplacianKind::Normalized => deg
            .iter()
            .map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 })
            .collect(),
    };
    let mut trip = Vec::with_capacity(n + 2 * g.edges().len());
    for (i, &d) in deg.iter().enumerate() {
        trip.push((i, i, d * scale[i] * scale[i]));
    }
    for e in g.edges() {
        let v = -e.w * scale[e.i] * scale[e.j];
        trip.push((e.i, e.j, v));
        trip.push((e.j, e.i, v));
    }
    let mut l = SparseSymMatrix::from_triplets(n, &trip).expect("laplacian is symmetric");
    l.kind = Some(kind);
    l
}
