//! Block Krylov subspace approximation of graph kernel blocks.
//!
//! For a graph Laplacian `L` with spectrum in `[0, Λ]`, a positive function `φ`
//! and a set of sampling nodes `W = {w_1, ..., w_N}`, this crate approximates the
//! kernel block `φ(L) E_W` (the `N` kernel columns at the sampling nodes) with five
//! polynomial methods that only touch `L` through matrix-vector products:
//!
//! | method  | module                    | basis                                  |
//! |---------|---------------------------|----------------------------------------|
//! | `cbl`   | [`lanczos::classical`]    | classical block Lanczos                |
//! | `gbl`   | [`lanczos::global`]       | global (Frobenius) block Lanczos       |
//! | `sbl`   | [`lanczos::sequential`]   | one ordinary Lanczos run per column    |
//! | `cheb`  | [`chebyshev`]             | Chebyshev–Lobatto interpolant of `φ`   |
//! | `cheb2` | [`chebyshev`]             | square of the interpolant of `√φ`      |
//!
//! On top of the kernel blocks, [`rls`] builds regularized least-squares kernel
//! predictors and [`diagnostics`] evaluates error bounds, convergence sweeps and
//! collocation spectra against the dense oracle in [`kernel`].

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod chebyshev;
pub mod diagnostics;
pub mod error;
pub mod graph;
pub mod kernel;
pub mod lanczos;
pub mod linalg;
pub mod methods;
pub mod rls;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{BlockVector, Graph, LaplacianKind, OpCounters, SparseSymMatrix};
pub use kernel::{DenseOracle, KernelFunction};
pub use linalg::DenseMatrix;
pub use methods::Method;
