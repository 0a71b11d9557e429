//! Uniform entry point over the five approximation methods.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chebyshev::{cheb_apply, cheb_coefficients, cheb_squared_apply};
use crate::error::{Error, Result};
use crate::graph::{unit_block, BlockVector, OpCounters, SparseSymMatrix};
use crate::kernel::KernelFunction;
use crate::lanczos::{
    classical_block_lanczos, global_block_lanczos, sequential_lanczos_approximate, LanczosOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Cbl,
    Gbl,
    Sbl,
    Cheb,
    Cheb2,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Cbl,
        Method::Gbl,
        Method::Sbl,
        Method::Cheb,
        Method::Cheb2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Cbl => "cbl",
            Method::Gbl => "gbl",
            Method::Sbl => "sbl",
            Method::Cheb => "cheb",
            Method::Cheb2 => "cheb2",
        }
    }

    pub fn is_lanczos(self) -> bool {
        matches!(self, Method::Cbl | Method::Gbl | Method::Sbl)
    }

    /// Matrix-vector products spent for `m` iterations on `N` columns.
    pub fn expected_mv(self, m: usize, width: usize) -> u64 {
        let steps = match self {
            Method::Cheb2 => 2 * (m / 2),
            _ => m,
        };
        (steps * width) as u64
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cbl" => Ok(Method::Cbl),
            "gbl" => Ok(Method::Gbl),
            "sbl" => Ok(Method::Sbl),
            "cheb" => Ok(Method::Cheb),
            "cheb2" | "cheb²" | "cheb^2" => Ok(Method::Cheb2),
            other => Err(Error::InvalidInput(format!("unknown method '{other}'"))),
        }
    }
}

/// A kernel block approximation with its cost.
#[derive(Debug, Clone)]
pub struct Approximation {
    pub method: Method,
    pub requested_m: usize,
    /// Iterations actually run; below `requested_m` after a Lanczos breakdown
    /// (for `sbl`, the largest over all columns).
    pub effective_m: usize,
    pub block: BlockVector,
    pub counters: OpCounters,
}

/// Approximates `φ(L)·E_W` with `m` iterations of `method`, using the
/// spectral bound `Λ` of `L` for the Chebyshev methods.
pub fn approximate_kernel_block(
    l: &SparseSymMatrix,
    phi: &KernelFunction,
    nodes: &[usize],
    method: Method,
    m: usize,
    opts: LanczosOptions,
) -> Result<Approximation> {
    if m == 0 {
        return Err(Error::InvalidInput(
            "number of iterations m must be >= 1".into(),
        ));
    }
    let e = unit_block(nodes, l.n())?;
    let lambda_max = l.spectral_upper_bound();
    let mut counters = OpCounters::new();
    let (block, effective_m) = match method {
        Method::Cbl => {
            let f = classical_block_lanczos(l, &e, m, opts, &mut counters)?;
            (f.approximate(phi, &mut counters)?, f.effective_m())
        }
        Method::Gbl => {
            let f = global_block_lanczos(l, &e, m, opts, &mut counters)?;
            (f.approximate(phi, &mut counters)?, f.effective_m())
        }
        Method::Sbl => {
            let r = sequential_lanczos_approximate(l, &e, m, phi, opts, &mut counters)?;
            let em = r.effective_m.iter().copied().max().unwrap_or(0);
            (r.block, em)
        }
        Method::Cheb => {
            let c = cheb_coefficients(phi, lambda_max, m)?;
            (cheb_apply(l, &e, &c, &mut counters)?, m)
        }
        Method::Cheb2 => (
            cheb_squared_apply(l, &e, phi, lambda_max, m, &mut counters)?,
            m,
        ),
    };
    Ok(Approximation {
        method,
        requested_m: m,
        effective_m,
        block,
        counters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_laplacian, path_graph, LaplacianKind};

    #[test]
    fn parse_and_display() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert_eq!("CHEB2".parse::<Method>().unwrap(), Method::Cheb2);
        assert!("exact".parse::<Method>().is_err());
    }

    #[test]
    fn mv_counts() {
        let l = build_laplacian(&path_graph(60), LaplacianKind::Normalized);
        let phi = KernelFunction::diffusion(1.0).unwrap();
        let nodes = [5, 30, 44];
        for method in Method::ALL {
            for m in [1, 4, 7] {
                let a = approximate_kernel_block(
                    &l,
                    &phi,
                    &nodes,
                    method,
                    m,
                    LanczosOptions::default(),
                )
                .unwrap();
                assert_eq!(a.counters.mv, method.expected_mv(m, 3), "{method} m={m}");
            }
        }
    }

    #[test]
    fn zero_iterations_rejected() {
        let l = build_laplacian(&path_graph(6), LaplacianKind::Normalized);
        let phi = KernelFunction::diffusion(1.0).unwrap();
        assert!(approximate_kernel_block(
            &l,
            &phi,
            &[1],
            Method::Cheb,
            0,
            LanczosOptions::default()
        )
        .is_err());
    }
}
