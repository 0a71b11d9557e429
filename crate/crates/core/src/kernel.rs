//! Kernel-generating functions `φ` and the dense spectral oracle for
//! `φ(L)·E_W`.

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{unit_block, BlockVector, SparseSymMatrix};
use crate::linalg::{sym_eig, DenseMatrix, SymEigDecomposition};

/// Relative overshoot of `[0, Λ]` tolerated when evaluating `φ` at eigenvalues.
pub const TOL_SPEC: f64 = 1e-8;
/// Default node cap for the dense oracle.
pub const DEFAULT_ORACLE_CAP: usize = 2000;
/// Environment variable overriding [`DEFAULT_ORACLE_CAP`].
pub const ORACLE_CAP_ENV: &str = "GRAPHKRYLOV_ORACLE_CAP";

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User supplied `φ` with an explicit positivity declaration.
#[derive(Clone)]
pub struct CustomKernel {
    pub name: String,
    pub eval: ScalarFn,
    pub positive: bool,
}

/// Scalar function `φ` defining the kernel `φ(L)`.
#[derive(Clone)]
pub enum KernelFunction {
    /// `e^{−tλ}`
    Diffusion {
        t: f64,
    },
    /// `(ε + λ)^{−s}`
    Spline {
        eps: f64,
        s: f64,
    },
    Custom(CustomKernel),
}

impl KernelFunction {
    pub fn diffusion(t: f64) -> Result<Self> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "diffusion time must be >= 0, got {t}"
            )));
        }
        Ok(Self::Diffusion { t })
    }

    pub fn spline(eps: f64, s: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite() && s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "spline kernel needs eps > 0 and s > 0, got eps={eps}, s={s}"
            )));
        }
        Ok(Self::Spline { eps, s })
    }

    pub fn custom(
        name: impl Into<String>,
        positive: bool,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::Custom(CustomKernel {
            name: name.into(),
            eval: Arc::new(f),
            positive,
        })
    }

    /// `φ(λ)` without a domain check.
    pub fn eval(&self, lambda: f64) -> f64 {
        match self {
            Self::Diffusion { t } => (-t * lambda).exp(),
            Self::Spline { eps, s } => (eps + lambda).powf(-s),
            Self::Custom(c) => (c.eval)(lambda),
        }
    }

    /// `φ(λ)`, rejecting `λ` outside `[0, Λ]` beyond the [`TOL_SPEC`] margin.
    pub fn eval_checked(&self, lambda: f64, lambda_max: f64) -> Result<f64> {
        let margin = TOL_SPEC * lambda_max.max(1.0);
        if !(lambda >= -margin && lambda <= lambda_max + margin) {
            return Err(Error::DomainError {
                value: lambda,
                upper: lambda_max,
            });
        }
        Ok(self.eval(lambda))
    }

    /// Whether `φ` is known to be positive on every `[0, Λ]`.
    pub fn is_positive(&self) -> bool {
        match self {
            Self::Diffusion { .. } | Self::Spline { .. } => true,
            Self::Custom(c) => c.positive,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Diffusion { t } => format!("diffusion(t={t})"),
            Self::Spline { eps, s } => format!("spline(eps={eps}, s={s})"),
            Self::Custom(c) => c.name.clone(),
        }
    }
}

impl fmt::Debug for KernelFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for KernelFunction {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "kind", rename_all = "lowercase")]
        enum Repr<'a> {
            Diffusion { t: f64 },
            Spline { eps: f64, s: f64 },
            Custom { name: &'a str, positive: bool },
        }
        match self {
            Self::Diffusion { t } => Repr::Diffusion { t: *t },
            Self::Spline { eps, s } => Repr::Spline { eps: *eps, s: *s },
            Self::Custom(c) => Repr::Custom {
                name: &c.name,
                positive: c.positive,
            },
        }
        .serialize(ser)
    }
}

/// Node cap for the dense oracle, honouring `GRAPHKRYLOV_ORACLE_CAP`.
pub fn oracle_cap() -> usize {
    std::env::var(ORACLE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_CAP)
}

/// Full spectral decomposition of a (small) Laplacian, reused across kernels.
#[derive(Debug, Clone)]
pub struct DenseOracle {
    eig: SymEigDecomposition,
    lambda_max: f64,
}

impl DenseOracle {
    pub fn new(l: &SparseSymMatrix) -> Result<Self> {
        Self::with_cap(l, oracle_cap())
    }

    pub fn with_cap(l: &SparseSymMatrix, cap: usize) -> Result<Self> {
        if l.n() > cap {
            return Err(Error::SizeExceeded { size: l.n(), cap });
        }
        Ok(Self {
            eig: sym_eig(&l.to_dense())?,
            lambda_max: l.spectral_upper_bound(),
        })
    }

    pub fn n(&self) -> usize {
        self.eig.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eig.eigenvalues
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    fn weights(&self, phi: &KernelFunction) -> Result<Vec<f64>> {
        self.eig
            .eigenvalues
            .iter()
            .map(|&l| phi.eval_checked(l, self.lambda_max))
            .collect()
    }

    /// `φ(L) · X`.
    pub fn apply(&self, phi: &KernelFunction, x: &DenseMatrix) -> Result<DenseMatrix> {
        self.eig
            .apply_function_to(|l| phi.eval_checked(l, self.lambda_max), x)
    }

    /// `φ(L) · E_W`.
    pub fn kernel_block(&self, phi: &KernelFunction, nodes: &[usize]) -> Result<BlockVector> {
        let n = self.n();
        unit_block(nodes, n)?;
        let w = self.weights(phi)?;
        let v = &self.eig.eigenvectors;
        let coeffs = DenseMatrix::from_fn(n, nodes.len(), |k, i| w[k] * v[(nodes[i], k)]);
        Ok(BlockVector::from_matrix(v.matmul(&coeffs)?))
    }

    /// `E_Wᵀ · φ(L) · E_W`, symmetric by construction.
    pub fn collocation(&self, phi: &KernelFunction, nodes: &[usize]) -> Result<DenseMatrix> {
        unit_block(nodes, self.n())?;
        let w = self.weights(phi)?;
        let v = &self.eig.eigenvectors;
        let nn = nodes.len();
        let mut k = DenseMatrix::zeros(nn, nn);
        for j in 0..nn {
            for i in 0..=j {
                let s: f64 = w
                    .iter()
                    .enumerate()
                    .map(|(q, &wq)| v[(nodes[i], q)] * wq * v[(nodes[j], q)])
                    .sum();
                k[(i, j)] = s;
                k[(j, i)] = s;
            }
        }
        Ok(k)
    }
}

/// Ground truth `φ(L)·E_W` by dense eigendecomposition.
pub fn exact_kernel_block(
    l: &SparseSymMatrix,
    phi: &KernelFunction,
    nodes: &[usize],
) -> Result<BlockVector> {
    DenseOracle::new(l)?.kernel_block(phi, nodes)
}

/// Ground truth collocation matrix `E_Wᵀ·φ(L)·E_W`.
pub fn exact_collocation(
    l: &SparseSymMatrix,
    phi: &KernelFunction,
    nodes: &[usize],
) -> Result<DenseMatrix> {
    DenseOracle::new(l)?.collocation(phi, nodes)
}
