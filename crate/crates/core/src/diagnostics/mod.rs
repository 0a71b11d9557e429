//! Error bounds, best-approximation estimates, convergence sweeps against the
//! dense oracle and collocation spectra.

pub mod dd;

use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{OpCounters, SparseSymMatrix};
use crate::kernel::{DenseOracle, KernelFunction};
use crate::lanczos::LanczosOptions;
use crate::linalg::{general_eigenvalues, sym_eig, DenseMatrix, GENERAL_EIG_MAX_DIM};
use crate::methods::{approximate_kernel_block, Method};
use crate::rls::{predict_exact_with, predict_from_block, TrainingSet};

use dd::Dd;

/// Relative symmetry defect below which a collocation matrix is treated as
/// symmetric.
pub const TOL_SYMMETRIC_COLLOCATION: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Best approximation estimate

fn phi_dd(phi: &KernelFunction, lambda: Dd) -> Option<Dd> {
    match phi {
        KernelFunction::Diffusion { t } => Some((Dd::new(-t) * lambda).exp()),
        KernelFunction::Spline { eps, s } => Some((Dd::new(*eps) + lambda).powf(-s)),
        KernelFunction::Custom(_) => None,
    }
}

/// Upper estimate `Ê_m` of the best uniform polynomial approximation error of
/// `φ` on `[0, Λ]` by polynomials of degree `m`.
///
/// For `m ≥ 1` this is the uniform error of the degree-`m` Chebyshev–Lobatto
/// interpolant measured on `64(m + 1)` equispaced points; for `m = 0` it is
/// half the range of `φ` on the same grid. Diffusion and spline kernels are
/// evaluated in double-double arithmetic, so estimates far below `f64`
/// rounding are resolved; custom kernels use `f64`.
pub fn best_approx_estimate(phi: &KernelFunction, lambda_max: f64, m: usize) -> f64 {
    let grid = 64 * (m + 1);
    if phi_dd(phi, Dd::ZERO).is_some() {
        best_approx_dd(phi, lambda_max, m, grid)
    } else {
        best_approx_f64(phi, lambda_max, m, grid)
    }
}

fn best_approx_dd(phi: &KernelFunction, lambda_max: f64, m: usize, grid: usize) -> f64 {
    let lam = Dd::new(lambda_max);
    let half = Dd::new(0.5);
    let f = |x: Dd| phi_dd(phi, half * lam * (Dd::ONE - x)).expect("dd kernel");
    // Grid in x = 1 − 2λ/Λ, from 1 down to −1.
    let xs: Vec<Dd> = (0..grid)
        .map(|g| Dd::ONE - Dd::new((2 * g) as f64) / Dd::new((grid - 1) as f64))
        .collect();
    if m == 0 {
        let vals: Vec<Dd> = xs.iter().map(|&x| f(x)).collect();
        let mut lo = vals[0];
        let mut hi = vals[0];
        for &v in &vals {
            if v < lo {
                lo = v;
            }
            if v > hi {
                hi = v;
            }
        }
        return (half * (hi - lo)).to_f64();
    }
    let nodes: Vec<Dd> = (0..=m).map(|j| Dd::cos_pi_ratio(j, m)).collect();
    let fvals: Vec<Dd> = nodes.iter().map(|&x| f(x)).collect();
    let weights: Vec<Dd> = (0..=m)
        .map(|j| {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            Dd::new(if j == 0 || j == m { 0.5 * s } else { s })
        })
        .collect();
    let mut worst = 0.0f64;
    for &x in &xs {
        let mut num = Dd::ZERO;
        let mut den = Dd::ZERO;
        let mut hit = None;
        for j in 0..=m {
            let d = x - nodes[j];
            if d.hi == 0.0 {
                hit = Some(fvals[j]);
                break;
            }
            let w = weights[j] / d;
            num = num + w * fvals[j];
            den = den + w;
        }
        let p = hit.unwrap_or_else(|| num / den);
        worst = worst.max((p - f(x)).abs().to_f64());
    }
    worst
}

fn best_approx_f64(phi: &KernelFunction, lambda_max: f64, m: usize, grid: usize) -> f64 {
    let f = |x: f64| phi.eval(0.5 * lambda_max * (1.0 - x));
    let xs: Vec<f64> = (0..grid)
        .map(|g| 1.0 - 2.0 * g as f64 / (grid - 1) as f64)
        .collect();
    if m == 0 {
        let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        return 0.5 * (hi - lo);
    }
    let nodes: Vec<f64> = (0..=m)
        .map(|j| (std::f64::consts::PI * j as f64 / m as f64).cos())
        .collect();
    let fvals: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
    let mut worst = 0.0f64;
    for &x in &xs {
        let mut num = 0.0;
        let mut den = 0.0;
        let mut hit = None;
        for j in 0..=m {
            let d = x - nodes[j];
            if d == 0.0 {
                hit = Some(fvals[j]);
                break;
            }
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            let w = if j == 0 || j == m { 0.5 * s } else { s } / d;
            num += w * fvals[j];
            den += w;
        }
        let p = hit.unwrap_or(num / den);
        worst = worst.max((p - f(x)).abs());
    }
    worst
}

// ---------------------------------------------------------------------------
// Explicit bounds

/// Constants `(b, d)` of the exponential approximation bound:
/// `b = (√5 − 1)/2`, `d = (√5 − 2)·e^b`.
pub fn stewart_leyk_constants() -> (f64, f64) {
    let s5 = 5f64.sqrt();
    let b = 0.5 * (s5 - 1.0);
    (b, (s5 - 2.0) * b.exp())
}

/// Upper bound for the best degree-`m` approximation error of `e^{−tλ}` on
/// `[0, Λ]`.
pub fn stewart_leyk_bound(t: f64, lambda_max: f64, m: usize) -> f64 {
    let (b, d) = stewart_leyk_constants();
    let tl = t * lambda_max;
    let mf = m as f64;
    if mf <= tl {
        2.0 * (-b * (mf + 1.0).powi(2) / tl).exp()
            * (1.0 + (tl * std::f64::consts::PI / (4.0 * b)).sqrt())
            + 2.0 * d.powf(tl) / (1.0 - d)
    } else {
        2.0 * d.powf(mf) / (1.0 - d)
    }
}

/// `2√N·Ê`: bound on the Frobenius error of the Lanczos approximants.
pub fn lanczos_error_bound(width: usize, e_hat: f64) -> f64 {
    2.0 * (width as f64).sqrt() * e_hat
}

/// `√N·(2 + (2/π)·log(m + 1))·Ê`: bound on the Frobenius error of `cheb`.
pub fn cheb_error_bound(width: usize, m: usize, e_hat: f64) -> f64 {
    (width as f64).sqrt() * (2.0 + 2.0 / std::f64::consts::PI * ((m + 1) as f64).ln()) * e_hat
}

/// Error bound for `m` iterations of `method`. Lanczos methods with `m`
/// blocks produce a degree `m − 1` polynomial; `cheb` has degree `m`.
/// There is no such bound for `cheb2`.
pub fn method_error_bound(
    method: Method,
    phi: &KernelFunction,
    lambda_max: f64,
    width: usize,
    m: usize,
) -> Option<f64> {
    match method {
        Method::Cbl | Method::Gbl | Method::Sbl => Some(lanczos_error_bound(
            width,
            best_approx_estimate(phi, lambda_max, m.saturating_sub(1)),
        )),
        Method::Cheb => Some(cheb_error_bound(
            width,
            m,
            best_approx_estimate(phi, lambda_max, m),
        )),
        Method::Cheb2 => None,
    }
}

/// `(min φ, max φ)` sampled on 4097 equispaced points of `[0, Λ]`.
pub fn phi_range(phi: &KernelFunction, lambda_max: f64) -> (f64, f64) {
    let k = 4096;
    (0..=k)
        .map(|i| phi.eval(lambda_max * i as f64 / k as f64))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

/// Constant `C = (‖y‖₂/(φ_min + γN))·(1 + φ_max/(φ_min + γN))` relating the
/// predictor error to the kernel block error for small perturbations.
pub fn predictor_bound_constant(
    label_norm: f64,
    phi_min: f64,
    phi_max: f64,
    gamma: f64,
    width: usize,
) -> f64 {
    let shift = phi_min + gamma * width as f64;
    label_norm / shift * (1.0 + phi_max / shift)
}

/// Largest singular value.
pub fn spectral_norm(a: &DenseMatrix) -> Result<f64> {
    let g = a.t_matmul(a)?;
    let ev = sym_eig(&g)?.eigenvalues;
    Ok(ev.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

// ---------------------------------------------------------------------------
// Studies

/// Sweep configuration shared by the studies.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub methods: Vec<Method>,
    pub m_values: Vec<usize>,
    pub opts: LanczosOptions,
    /// Worker threads; 0 picks the available parallelism.
    pub threads: usize,
}

impl StudyConfig {
    pub fn new(methods: Vec<Method>, m_values: Vec<usize>) -> Self {
        Self {
            methods,
            m_values,
            opts: LanczosOptions::default(),
            threads: 0,
        }
    }
}

/// Outcome of one `(method, m)` run of a convergence sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub method: Method,
    pub m: usize,
    pub effective_m: usize,
    /// `‖φ(L)E_W − approximant‖_F`.
    pub error_fro: Option<f64>,
    /// Largest absolute entry of the same difference.
    pub error_uniform: Option<f64>,
    /// Theoretical bound on `error_fro`, when one exists.
    pub bound: Option<f64>,
    pub mv: u64,
    pub dot: u64,
    pub axpy: u64,
    /// `‖y − y^{(kr)}‖_∞` against the exact predictor, when labels are given.
    pub predictor_error_uniform: Option<f64>,
    /// `‖y − y^{(kr)}‖_2` against the exact predictor, when labels are given.
    pub predictor_error_l2: Option<f64>,
    /// `ok`, `non_invertible` or `failed: <reason>`.
    pub status: String,
}

impl ConvergenceRecord {
    pub fn counters(&self) -> OpCounters {
        OpCounters {
            mv: self.mv,
            dot: self.dot,
            axpy: self.axpy,
        }
    }
}

fn parallel_map<T: Sync, R: Send>(
    items: &[T],
    threads: usize,
    f: impl Fn(&T) -> R + Sync,
) -> Vec<R> {
    let threads = if threads == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        threads
    }
    .min(items.len().max(1));
    if threads <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let results = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|_| {
                s.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= items.len() {
                            break;
                        }
                        out.push((i, f(&items[i])));
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("study worker panicked"))
            .collect::<Vec<_>>()
    });
    for (i, r) in results {
        slots[i] = Some(r);
    }
    slots
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}

/// Runs every `(method, m)` pair against the dense oracle. With a training
/// set (whose nodes must equal `nodes`) the predictor errors are recorded as
/// well; a singular collocation system is recorded, not raised.
pub fn convergence_study(
    l: &SparseSymMatrix,
    phi: &KernelFunction,
    nodes: &[usize],
    train: Option<&TrainingSet>,
    cfg: &StudyConfig,
) -> Result<Vec<ConvergenceRecord>> {
    let oracle = DenseOracle::new(l)?;
    if let Some(t) = train {
        if t.nodes() != nodes {
            return Err(Error::InvalidInput(
                "training nodes must equal the sampling nodes".into(),
            ));
        }
    }
    let exact = oracle.kernel_block(phi, nodes)?;
    let exact_pred = train
        .map(|t| predict_exact_with(&oracle, phi, t))
        .transpose()?;
    let lambda_max = l.spectral_upper_bound();
    let width = nodes.len();

    let jobs: Vec<(Method, usize)> = cfg
        .methods
        .iter()
        .flat_map(|&me| cfg.m_values.iter().map(move |&m| (me, m)))
        .collect();

    Ok(parallel_map(&jobs, cfg.threads, |&(method, m)| {
        let bound = method_error_bound(method, phi, lambda_max, width, m);
        let mut rec = ConvergenceRecord {
            method,
            m,
            effective_m: 0,
            error_fro: None,
            error_uniform: None,
            bound,
            mv: 0,
            dot: 0,
            axpy: 0,
            predictor_error_uniform: None,
            predictor_error_l2: None,
            status: "ok".into(),
        };
        let approx = match approximate_kernel_block(l, phi, nodes, method, m, cfg.opts) {
            Ok(a) => a,
            Err(e) => {
                rec.status = format!("failed: {e}");
                return rec;
            }
        };
        rec.effective_m = approx.effective_m;
        rec.mv = approx.counters.mv;
        rec.dot = approx.counters.dot;
        rec.axpy = approx.counters.axpy;
        let diff = approx.block.sub(&exact).expect("same shape");
        rec.error_fro = Some(diff.frobenius_norm());
        rec.error_uniform = Some(diff.max_abs());
        if let (Some(t), Some(ex)) = (train, exact_pred.as_ref()) {
            match predict_from_block(method.to_string(), Some(m), &approx.block, t) {
                Ok(p) => {
                    rec.predictor_error_uniform = Some(p.uniform_distance(ex));
                    rec.predictor_error_l2 = Some(p.l2_distance(ex));
                }
                Err(Error::NonInvertibleCollocation { .. }) => {
                    rec.status = "non_invertible".into();
                }
                Err(e) => rec.status = format!("failed: {e}"),
            }
        }
        rec
    }))
}

/// Eigenvalues of one approximate collocation matrix `E_Wᵀ·p(L)·E_W`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRecord {
    pub method: Method,
    pub m: usize,
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// `‖K − Kᵀ‖_F`.
    pub symmetry_defect: f64,
    /// `‖K‖_F`.
    pub norm: f64,
    pub status: String,
}

impl SpectrumRecord {
    pub fn min_real(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetry_defect <= TOL_SYMMETRIC_COLLOCATION * self.norm
    }
}

/// Eigenvalues of a collocation matrix: symmetric solver when `K` is
/// symmetric up to [`TOL_SYMMETRIC_COLLOCATION`], general solver otherwise.
pub fn collocation_eigenvalues(k: &DenseMatrix) -> Result<Vec<Complex64>> {
    if k.symmetry_defect() <= TOL_SYMMETRIC_COLLOCATION * k.frobenius_norm() {
        let mut s = k.clone();
        s.symmetrize();
        return Ok(sym_eig(&s)?
            .eigenvalues
            .into_iter()
            .map(|v| Complex64::new(v, 0.0))
            .collect());
    }
    general_eigenvalues(k)
}

/// Spectra of `E_Wᵀ·p^{(kr)}(L)·E_W` for each method at a fixed `m`.
pub fn collocation_spectrum_study(
    l: &SparseSymMatrix,
    phi: &KernelFunction,
    nodes: &[usize],
    m: usize,
    methods: &[Method],
    opts: LanczosOptions,
) -> Result<Vec<SpectrumRecord>> {
    if nodes.len() > GENERAL_EIG_MAX_DIM {
        return Err(Error::SizeExceeded {
            size: nodes.len(),
            cap: GENERAL_EIG_MAX_DIM,
        });
    }
    let mut out = Vec::with_capacity(methods.len());
    for &method in methods {
        let mut rec = SpectrumRecord {
            method,
            m,
            eigenvalues: vec![],
            symmetry_defect: 0.0,
            norm: 0.0,
            status: "ok".into(),
        };
        match approximate_kernel_block(l, phi, nodes, method, m, opts) {
            Ok(a) => {
                let k = a.block.rows_at(nodes);
                rec.symmetry_defect = k.symmetry_defect();
                rec.norm = k.frobenius_norm();
                match collocation_eigenvalues(&k) {
                    Ok(ev) => rec.eigenvalues = ev,
                    Err(e) => rec.status = format!("failed: {e}"),
                }
            }
            Err(e) => rec.status = format!("failed: {e}"),
        }
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let (b, d) = stewart_leyk_constants();
        assert!((b - 0.6180339887).abs() < 1e-9);
        assert!((d - 0.4380).abs() < 1e-3);
    }

    #[test]
    fn literal_bounds() {
        assert_eq!(lanczos_error_bound(1, 0.5), 1.0);
        assert_eq!(lanczos_error_bound(4, 0.0), 0.0);
        assert_eq!(cheb_error_bound(9, 0, 0.25), 3.0 * 2.0 * 0.25);
    }

    #[test]
    fn stewart_leyk_shape() {
        let mut last = f64::INFINITY;
        for m in 0..100 {
            let v = stewart_leyk_bound(20.0, 2.0, m);
            assert!(v.is_finite() && v > 0.0);
            if m > 40 {
                assert!(v < last);
            }
            last = v;
        }
    }

    #[test]
    fn estimate_of_polynomials_and_constants() {
        let p = KernelFunction::custom("cubic", true, |l| 1.0 + l - 0.3 * l * l * l);
        assert!(best_approx_estimate(&p, 2.0, 3) <= 1e-13);
        assert!(best_approx_estimate(&p, 2.0, 7) <= 1e-13);
        let one = KernelFunction::diffusion(0.0).unwrap();
        for m in 0..5 {
            assert_eq!(best_approx_estimate(&one, 2.0, m), 0.0);
        }
    }

    #[test]
    fn degree_zero_is_half_range() {
        let phi = KernelFunction::diffusion(1.0).unwrap();
        let e0 = best_approx_estimate(&phi, 2.0, 0);
        assert!((e0 - 0.5 * (1.0 - (-2.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn dd_and_f64_paths_agree_when_resolvable() {
        let phi = KernelFunction::spline(0.1, 1.5).unwrap();
        let (a, b) = (phi.clone(), phi.clone());
        let custom = KernelFunction::custom("same", true, move |l| a.eval(l));
        for m in [1, 3, 6, 10] {
            let x = best_approx_estimate(&b, 2.0, m);
            let y = best_approx_estimate(&custom, 2.0, m);
            assert!((x - y).abs() <= 1e-9 * x, "m={m}: {x} vs {y}");
        }
    }

    #[test]
    fn exponential_estimate_below_explicit_bound() {
        let phi = KernelFunction::diffusion(20.0).unwrap();
        let e = best_approx_estimate(&phi, 2.0, 45);
        let (_, d) = stewart_leyk_constants();
        assert!(e > 0.0 && e <= 2.0 * d.powi(45) / (1.0 - d));
    }

    #[test]
    fn estimate_decreases() {
        let phi = KernelFunction::diffusion(5.0).unwrap();
        let mut last = f64::INFINITY;
        for m in 1..30 {
            let e = best_approx_estimate(&phi, 2.0, m);
            assert!(e < last, "m={m}");
            last = e;
        }
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let a = DenseMatrix::from_diag(&[1.0, -3.0, 2.0]);
        assert!((spectral_norm(&a).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn parallel_map_preserves_order() {
        let v: Vec<usize> = (0..100).collect();
        let out = parallel_map(&v, 4, |x| x * 2);
        assert_eq!(out, (0..100).map(|x| x * 2).collect::<Vec<_>>());
    }
}
