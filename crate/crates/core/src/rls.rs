//! Regularized least-squares kernel predictors `y = φ(L)E_W·c` with
//! `(E_Wᵀφ(L)E_W + γN·I)·c = y_W`, exact or from an approximate kernel block.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{unit_block, BlockVector, OpCounters, SparseSymMatrix};
use crate::kernel::{DenseOracle, KernelFunction};
use crate::lanczos::{classical_block_lanczos, LanczosOptions};
use crate::linalg::{solve_linear, DenseMatrix};
use crate::methods::{approximate_kernel_block, Method};

/// Labelled nodes and the regularization parameter `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    nodes: Vec<usize>,
    labels: Vec<f64>,
    gamma: f64,
}

impl TrainingSet {
    pub fn new(nodes: Vec<usize>, labels: Vec<f64>, gamma: f64) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidInput("training set is empty".into()));
        }
        if nodes.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: nodes.len(),
                found: labels.len(),
            });
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "gamma must be >= 0, got {gamma}"
            )));
        }
        let mut sorted = nodes.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateNode(w[0]));
        }
        Ok(Self {
            nodes,
            labels,
            gamma,
        })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn check_range(&self, n: usize) -> Result<()> {
        unit_block(&self.nodes, n).map(|_| ())
    }
}

/// A trained predictor and its signal on every node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Predictor {
    /// `exact` or one of the method names.
    pub method: String,
    /// Iterations used; absent for the exact predictor.
    pub m: Option<usize>,
    pub gamma: f64,
    pub coefficients: Vec<f64>,
    pub signal: Vec<f64>,
    /// `max_i |y(w_i) − y_i|`.
    #[serde(rename = "residual_at_W")]
    pub residual_at_w: f64,
}

impl Predictor {
    fn build(
        method: String,
        m: Option<usize>,
        train: &TrainingSet,
        coefficients: Vec<f64>,
        signal: Vec<f64>,
    ) -> Self {
        let residual_at_w = train
            .nodes
            .iter()
            .zip(&train.labels)
            .map(|(&w, &y)| (signal[w] - y).abs())
            .fold(0.0, f64::max);
        Self {
            method,
            m,
            gamma: train.gamma,
            coefficients,
            signal,
            residual_at_w,
        }
    }

    /// `‖self − other‖_∞` over all nodes.
    pub fn uniform_distance(&self, other: &Predictor) -> f64 {
        self.signal
            .iter()
            .zip(&other.signal)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `‖self − other‖_2` over all nodes.
    pub fn l2_distance(&self, other: &Predictor) -> f64 {
        self.signal
            .iter()
            .zip(&other.signal)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Solves `(K_W + γN·I)·c = y`.
pub fn rls_coefficients(k_w: &DenseMatrix, gamma: f64, y: &[f64]) -> Result<Vec<f64>> {
    let n = k_w.rows();
    if !k_w.is_square() || y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.len(),
        });
    }
    let mut a = k_w.clone();
    a.shift_diagonal(gamma * n as f64);
    let rhs = DenseMatrix::from_col_major(n, 1, y.to_vec())?;
    match solve_linear(&a, &rhs) {
        Ok(c) => Ok(c.into_vec()),
        Err(Error::Singular { pivot }) => Err(Error::NonInvertibleCollocation { pivot }),
        Err(e) => Err(e),
    }
}

/// Predictor for a given (approximate) kernel block: the collocation matrix
/// is taken as the rows of the block at the training nodes.
pub fn predict_from_block(
    method: String,
    m: Option<usize>,
    block: &BlockVector,
    train: &TrainingSet,
) -> Result<Predictor> {
    let k_w = block.rows_at(&train.nodes);
    let c = rls_coefficients(&k_w, train.gamma, &train.labels)?;
    let signal = block.combine(&c)?;
    Ok(Predictor::build(method, m, train, c, signal))
}

/// Exact predictor from the dense oracle.
pub fn predict_exact(
    l: &SparseSymMatrix,
    phi: &KernelFunction,
    train: &TrainingSet,
) -> Result<Predictor> {
    predict_exact_with(&DenseOracle::new(l)?, phi, train)
}

/// Exact predictor reusing a prepared oracle.
pub fn predict_exact_with(
    oracle: &DenseOracle,
    phi: &KernelFunction,
    train: &TrainingSet,
) -> Result<Predictor> {
    train.check_range(oracle.n())?;
    let k_w = oracle.collocation(phi, &train.nodes)?;
    let c = rls_coefficients(&k_w, train.gamma, &train.labels)?;
    let block = oracle.kernel_block(phi, &train.nodes)?;
    let signal = block.combine(&c)?;
    Ok(Predictor::build("exact".into(), None, train, c, signal))
}

/// Predictor built from the explicit approximate kernel block of `method`.
pub fn predict_krylov(
    l: &SparseSymMatrix,
    phi: &KernelFunction,
    train: &TrainingSet,
    method: Method,
    m: usize,
    opts: LanczosOptions,
) -> Result<Predictor> {
    train.check_range(l.n())?;
    let approx = approximate_kernel_block(l, phi, &train.nodes, method, m, opts)?;
    predict_from_block(method.to_string(), Some(m), &approx.block, train)
}

/// Classical block Lanczos predictor computed from `H_m` alone: the
/// collocation matrix is `F_1ᵀφ(H_m)F_1` and the signal is
/// `[Q]·(φ(H_m)F_1·c)`. For positive `φ` the system is always solvable.
pub fn predict_cbl_hm_only(
    l: &SparseSymMatrix,
    phi: &KernelFunction,
    train: &TrainingSet,
    m: usize,
    opts: LanczosOptions,
) -> Result<Predictor> {
    if !phi.is_positive() {
        return Err(Error::InvalidInput(format!(
            "kernel function '{}' is not declared positive",
            phi.name()
        )));
    }
    let e = unit_block(&train.nodes, l.n())?;
    let mut counters = OpCounters::new();
    let f = classical_block_lanczos(l, &e, m, opts, &mut counters)?;
    let u = f.phi_h_first_columns(phi)?;
    let k_w = f.collocation(phi)?;
    let c = rls_coefficients(&k_w, train.gamma, &train.labels)?;
    let cm = DenseMatrix::from_col_major(c.len(), 1, c.clone())?;
    let signal = f
        .expand(&u.matmul(&cm)?, &mut counters)?
        .into_matrix()
        .into_vec();
    Ok(Predictor::build("cbl".into(), Some(m), train, c, signal))
}

/// `sign(y(v))` per node, with an exact zero mapped to `+1`.
pub fn classify_sign(p: &Predictor) -> Vec<i8> {
    p.signal
        .iter()
        .map(|&v| if v < 0.0 { -1 } else { 1 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_laplacian, path_graph, LaplacianKind};
    use crate::kernel::exact_kernel_block;

    #[test]
    fn small_systems() {
        let c = rls_coefficients(&DenseMatrix::from_diag(&[4.0]), 0.0, &[1.0]).unwrap();
        assert_eq!(c, vec![0.25]);
        let c = rls_coefficients(&DenseMatrix::identity(3), 0.0, &[1.0, -2.0, 3.0]).unwrap();
        assert_eq!(c, vec![1.0, -2.0, 3.0]);
        // Eigenvalue −γN = −1 makes the system singular.
        let k = DenseMatrix::from_diag(&[-1.0, 2.0]);
        assert!(matches!(
            rls_coefficients(&k, 0.5, &[1.0, 1.0]),
            Err(Error::NonInvertibleCollocation { .. })
        ));
    }

    #[test]
    fn training_set_validation() {
        assert!(TrainingSet::new(vec![], vec![], 0.0).is_err());
        assert!(TrainingSet::new(vec![1, 1], vec![0.0, 1.0], 0.0).is_err());
        assert!(TrainingSet::new(vec![1], vec![0.0, 1.0], 0.0).is_err());
        assert!(TrainingSet::new(vec![1], vec![1.0], -1.0).is_err());
        let l = build_laplacian(&path_graph(4), LaplacianKind::Standard);
        let t = TrainingSet::new(vec![7], vec![1.0], 0.0).unwrap();
        assert!(predict_exact(&l, &KernelFunction::diffusion(1.0).unwrap(), &t).is_err());
    }

    #[test]
    fn single_node_exact_interpolant() {
        let l = build_laplacian(&path_graph(15), LaplacianKind::Normalized);
        let phi = KernelFunction::diffusion(2.0).unwrap();
        let t = TrainingSet::new(vec![6], vec![1.0], 0.0).unwrap();
        let p = predict_exact(&l, &phi, &t).unwrap();
        let col = exact_kernel_block(&l, &phi, &[6]).unwrap();
        for i in 0..15 {
            assert!((p.signal[i] - col[(i, 0)] / col[(6, 0)]).abs() < 1e-13);
        }
        assert!(p.residual_at_w < 1e-14);
    }

    #[test]
    fn zero_labels_give_zero_predictor() {
        let l = build_laplacian(&path_graph(10), LaplacianKind::Standard);
        let phi = KernelFunction::spline(0.1, 2.0).unwrap();
        let t = TrainingSet::new(vec![1, 8], vec![0.0, 0.0], 0.1).unwrap();
        let p = predict_exact(&l, &phi, &t).unwrap();
        assert!(p.signal.iter().all(|&v| v == 0.0));
        assert_eq!(classify_sign(&p), vec![1; 10]);
    }

    #[test]
    fn constant_kernel_predictors() {
        let l = build_laplacian(&path_graph(12), LaplacianKind::Standard);
        let one = KernelFunction::diffusion(0.0).unwrap();
        let t = TrainingSet::new(vec![2, 9], vec![0.5, -1.5], 0.0).unwrap();
        for method in Method::ALL {
            let p = predict_krylov(&l, &one, &t, method, 3, LanczosOptions::default()).unwrap();
            assert!((p.coefficients[0] - 0.5).abs() < 1e-14);
            assert!((p.signal[9] + 1.5).abs() < 1e-14);
            assert!(p.signal[0].abs() < 1e-14);
        }
        let p = predict_cbl_hm_only(&l, &one, &t, 3, LanczosOptions::default()).unwrap();
        assert!((p.signal[2] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn hm_only_matches_explicit_block() {
        let l = build_laplacian(&path_graph(80), LaplacianKind::Normalized);
        let phi = KernelFunction::spline(0.1, 1.0).unwrap();
        let t = TrainingSet::new(vec![3, 40, 77], vec![1.0, -1.0, 1.0], 0.01).unwrap();
        let a = predict_cbl_hm_only(&l, &phi, &t, 6, LanczosOptions::default()).unwrap();
        let b = predict_krylov(&l, &phi, &t, Method::Cbl, 6, LanczosOptions::default()).unwrap();
        assert!(a.uniform_distance(&b) < 1e-12);
    }

    #[test]
    fn strong_regularization_shrinks_signal() {
        let l = build_laplacian(&path_graph(30), LaplacianKind::Standard);
        let phi = KernelFunction::diffusion(0.5).unwrap();
        let mut last = f64::INFINITY;
        for gamma in [0.0, 0.1, 1.0, 10.0, 1e3, 1e6] {
            let t = TrainingSet::new(vec![4, 20], vec![1.0, -1.0], gamma).unwrap();
            let p = predict_cbl_hm_only(&l, &phi, &t, 4, LanczosOptions::default()).unwrap();
            let norm = p.signal.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(norm <= last);
            last = norm;
        }
        assert!(last < 1e-5);
    }

    #[test]
    fn sign_tie_break() {
        let p = Predictor {
            method: "exact".into(),
            m: None,
            gamma: 0.0,
            coefficients: vec![],
            signal: vec![-2.0, 3.0, 0.0],
            residual_at_w: 0.0,
        };
        assert_eq!(classify_sign(&p), vec![-1, 1, 1]);
    }

    #[test]
    fn undeclared_positivity_rejected() {
        let l = build_laplacian(&path_graph(5), LaplacianKind::Standard);
        let phi = KernelFunction::custom("maybe", false, |x| 1.0 + x);
        let t = TrainingSet::new(vec![0], vec![1.0], 0.0).unwrap();
        assert!(predict_cbl_hm_only(&l, &phi, &t, 2, LanczosOptions::default()).is_err());
    }
}
