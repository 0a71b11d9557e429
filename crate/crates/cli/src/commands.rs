//! The subcommands. Each one loads its inputs, runs the library and writes
//! plot-ready tables plus a JSON document described in `schemas/`.

use std::path::PathBuf;

use clap::Args;
use graphkrylov::diagnostics::{
    collocation_spectrum_study, convergence_study, method_error_bound, ConvergenceRecord,
    StudyConfig,
};
use graphkrylov::kernel::{oracle_cap, DenseOracle};
use graphkrylov::lanczos::LanczosOptions;
use graphkrylov::methods::approximate_kernel_block;
use graphkrylov::rls::{
    classify_sign, predict_cbl_hm_only, predict_exact_with, predict_krylov, Predictor, TrainingSet,
};
use graphkrylov::{BlockVector, Error, KernelFunction, LaplacianKind, Method};
use serde::Serialize;

use crate::config::{
    build_kernel, load_graph, load_labels, parse_krylov_method, parse_m_values, parse_method,
    select_nodes, GraphArgs, GraphInput, KernelArgs, MValues, MethodChoice, NodeArgs,
};
use crate::error::CliError;
use crate::output::{ensure_dir, num, opt_num, opt_usize, write_csv, write_json};

/// Options for the Lanczos iterations.
#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Re-orthogonalize each new Lanczos block against the whole basis.
    #[arg(long)]
    pub reorth: bool,

    /// Worker threads for sweeps (0 uses every available core).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

impl SolverArgs {
    fn options(&self) -> LanczosOptions {
        LanczosOptions {
            reorthogonalize: self.reorth,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct KernelCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub nodes: NodeArgs,
    #[command(flatten)]
    pub solver: SolverArgs,

    /// Methods to run, comma separated (cbl, gbl, sbl, cheb, cheb2, exact).
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "cbl")]
    pub method: Vec<MethodChoice>,

    /// Iterations.
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct PredictCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub nodes: NodeArgs,
    #[command(flatten)]
    pub solver: SolverArgs,

    /// Labels at the sampling nodes: FILE, `random:SEED` or `const:VALUE`.
    #[arg(long)]
    pub labels: String,

    /// Regularization parameter.
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,

    #[arg(long, value_parser = parse_method, default_value = "exact")]
    pub method: MethodChoice,

    #[arg(long)]
    pub m: Option<usize>,

    /// Classical block Lanczos predictor computed from `H_m` only.
    #[arg(long)]
    pub hm_only: bool,

    /// Report a singular collocation system in the output and exit with 0.
    #[arg(long)]
    pub allow_singular: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergenceCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub nodes: NodeArgs,
    #[command(flatten)]
    pub solver: SolverArgs,

    #[arg(long, value_delimiter = ',', value_parser = parse_krylov_method,
          default_value = "cbl,gbl,sbl,cheb,cheb2")]
    pub method: Vec<Method>,

    /// Iteration counts as a comma separated list.
    #[arg(long, value_parser = parse_m_values, conflicts_with = "m_range")]
    pub m: Option<MValues>,

    /// Iteration counts as an inclusive range `a..b`.
    #[arg(long, value_parser = parse_m_values)]
    pub m_range: Option<MValues>,

    /// Also record predictor errors for these labels.
    #[arg(long)]
    pub labels: Option<String>,

    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub nodes: NodeArgs,
    #[command(flatten)]
    pub solver: SolverArgs,

    #[arg(long, value_delimiter = ',', value_parser = parse_krylov_method,
          default_value = "cbl,gbl,sbl,cheb,cheb2")]
    pub method: Vec<Method>,

    #[arg(long, default_value_t = 6)]
    pub m: usize,
}

#[derive(Debug, Clone, Args)]
pub struct GraphInfoCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
}

/// Description of the inputs, repeated at the top of every JSON document.
#[derive(Debug, Serialize)]
struct Context {
    graph: String,
    n: usize,
    edges: usize,
    laplacian: LaplacianKind,
    lambda_max: f64,
    phi: KernelFunction,
    nodes: Vec<usize>,
}

impl Context {
    fn new(g: &GraphInput, phi: &KernelFunction, nodes: &[usize]) -> Self {
        Self {
            graph: g.spec.clone(),
            n: g.graph.node_count(),
            edges: g.graph.edges().len(),
            laplacian: g.kind,
            lambda_max: g.laplacian.spectral_upper_bound(),
            phi: phi.clone(),
            nodes: nodes.to_vec(),
        }
    }
}

fn out_dir(g: &GraphArgs) -> Result<PathBuf, CliError> {
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("."));
    ensure_dir(&dir)?;
    Ok(dir)
}

fn oracle_if_small(g: &GraphInput) -> Result<Option<DenseOracle>, CliError> {
    if g.laplacian.n() > oracle_cap() {
        return Ok(None);
    }
    DenseOracle::new(&g.laplacian)
        .map(Some)
        .map_err(|e| CliError::lib("dense oracle", e))
}

fn require_m(m: Option<usize>, what: &str) -> Result<usize, CliError> {
    match m {
        Some(0) => Err(CliError::config("options", "--m must be >= 1")),
        Some(m) => Ok(m),
        None => Err(CliError::config("options", format!("{what} needs --m"))),
    }
}

// ---------------------------------------------------------------------------
// kernel

#[derive(Debug, Serialize)]
struct KernelRun {
    method: String,
    m: Option<usize>,
    effective_m: Option<usize>,
    mv: u64,
    dot: u64,
    axpy: u64,
    error_fro: Option<f64>,
    error_uniform: Option<f64>,
    bound: Option<f64>,
    file: String,
}

#[derive(Debug, Serialize)]
struct KernelSummary {
    #[serde(flatten)]
    context: Context,
    oracle: bool,
    runs: Vec<KernelRun>,
}

fn block_csv(
    dir: &std::path::Path,
    name: &str,
    nodes: &[usize],
    block: &BlockVector,
) -> Result<(), CliError> {
    let mut header = vec!["node".to_string()];
    header.extend(nodes.iter().map(|w| format!("w{w}")));
    let rows = (0..block.n()).map(|i| {
        let mut row = vec![i.to_string()];
        row.extend((0..block.width()).map(|j| num(block[(i, j)])));
        row
    });
    write_csv(dir, name, &header, rows)?;
    Ok(())
}

pub fn kernel(cmd: &KernelCmd) -> Result<(), CliError> {
    let g = load_graph(&cmd.graph)?;
    let phi = build_kernel(&cmd.kernel)?;
    let nodes = select_nodes(&cmd.nodes, g.graph.node_count())?;
    let needs_m = cmd.method.iter().any(|m| *m != MethodChoice::Exact);
    let m = if needs_m {
        Some(require_m(cmd.m, "a Krylov method")?)
    } else {
        cmd.m
    };
    let dir = out_dir(&cmd.graph)?;
    let oracle = oracle_if_small(&g)?;
    let exact = oracle
        .as_ref()
        .map(|o| o.kernel_block(&phi, &nodes))
        .transpose()
        .map_err(|e| CliError::lib("exact kernel block", e))?;
    let lambda_max = g.laplacian.spectral_upper_bound();

    let mut runs = Vec::new();
    for &choice in &cmd.method {
        let name = choice.name();
        let file = format!("kernel_{name}.csv");
        let (block, run_m, effective_m, counters) = match choice {
            MethodChoice::Exact => {
                let Some(ex) = exact.clone() else {
                    return Err(CliError::config(
                        "exact kernel block",
                        format!(
                            "graph has {} nodes, above the dense oracle cap of {}",
                            g.laplacian.n(),
                            oracle_cap()
                        ),
                    ));
                };
                (ex, None, None, Default::default())
            }
            MethodChoice::Krylov(method) => {
                let m = m.expect("checked above");
                let a = approximate_kernel_block(
                    &g.laplacian,
                    &phi,
                    &nodes,
                    method,
                    m,
                    cmd.solver.options(),
                )
                .map_err(|e| CliError::lib("kernel approximation", e))?;
                (a.block, Some(m), Some(a.effective_m), a.counters)
            }
        };
        let (error_fro, error_uniform) = match (&exact, choice) {
            (Some(ex), MethodChoice::Krylov(_)) => {
                let d = block.sub(ex).expect("same shape");
                (Some(d.frobenius_norm()), Some(d.max_abs()))
            }
            (Some(_), MethodChoice::Exact) => (Some(0.0), Some(0.0)),
            (None, _) => (None, None),
        };
        let bound = match (choice, run_m) {
            (MethodChoice::Krylov(method), Some(m)) => {
                method_error_bound(method, &phi, lambda_max, nodes.len(), m)
            }
            _ => None,
        };
        block_csv(&dir, &file, &nodes, &block)?;
        println!(
            "{name}: m={} error_uniform={}",
            opt_usize(run_m),
            opt_num(error_uniform)
        );
        runs.push(KernelRun {
            method: name,
            m: run_m,
            effective_m,
            mv: counters.mv,
            dot: counters.dot,
            axpy: counters.axpy,
            error_fro,
            error_uniform,
            bound,
            file,
        });
    }
    write_json(
        &dir,
        "kernel_summary.json",
        &KernelSummary {
            context: Context::new(&g, &phi, &nodes),
            oracle: exact.is_some(),
            runs,
        },
    )?;
    Ok(())
}

// ---------------------------------------------------------------------------
// predict

#[derive(Debug, Serialize)]
struct PredictorOutput {
    #[serde(flatten)]
    context: Context,
    labels: Vec<f64>,
    gamma: f64,
    hm_only: bool,
    /// `ok` or `non_invertible`.
    status: String,
    message: Option<String>,
    predictor: Option<Predictor>,
}

pub fn predict(cmd: &PredictCmd) -> Result<(), CliError> {
    let g = load_graph(&cmd.graph)?;
    let phi = build_kernel(&cmd.kernel)?;
    let nodes = select_nodes(&cmd.nodes, g.graph.node_count())?;
    let labels = load_labels(&cmd.labels, nodes.len())?;
    let train = TrainingSet::new(nodes.clone(), labels.clone(), cmd.gamma)
        .map_err(|e| CliError::lib("training set", e))?;
    let opts = cmd.solver.options();
    let stage = "predictor";
    if cmd.hm_only && cmd.method != MethodChoice::Krylov(Method::Cbl) {
        return Err(CliError::config(
            "options",
            "--hm-only requires --method cbl",
        ));
    }
    let result = match cmd.method {
        MethodChoice::Exact => {
            let oracle = oracle_if_small(&g)?.ok_or_else(|| {
                CliError::config(
                    stage,
                    format!(
                        "exact predictor needs n <= {} (set GRAPHKRYLOV_ORACLE_CAP)",
                        oracle_cap()
                    ),
                )
            })?;
            predict_exact_with(&oracle, &phi, &train)
        }
        MethodChoice::Krylov(method) => {
            let m = require_m(cmd.m, "a Krylov predictor")?;
            if cmd.hm_only {
                predict_cbl_hm_only(&g.laplacian, &phi, &train, m, opts)
            } else {
                predict_krylov(&g.laplacian, &phi, &train, method, m, opts)
            }
        }
    };
    let dir = out_dir(&cmd.graph)?;
    let context = Context::new(&g, &phi, &nodes);
    let mut doc = PredictorOutput {
        context,
        labels: labels.clone(),
        gamma: cmd.gamma,
        hm_only: cmd.hm_only,
        status: "ok".into(),
        message: None,
        predictor: None,
    };
    match result {
        Ok(p) => {
            let classes = classify_sign(&p);
            let mut label_at = vec![None; p.signal.len()];
            for (&w, &y) in nodes.iter().zip(&labels) {
                label_at[w] = Some(y);
            }
            let header: Vec<String> = ["node", "signal", "class", "label"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let rows = p.signal.iter().enumerate().map(|(i, &v)| {
                vec![
                    i.to_string(),
                    num(v),
                    classes[i].to_string(),
                    opt_num(label_at[i]),
                ]
            });
            write_csv(&dir, "classification.csv", &header, rows)?;
            println!("{}: residual_at_W={}", p.method, num(p.residual_at_w));
            doc.predictor = Some(p);
            write_json(&dir, "predictor.json", &doc)?;
            Ok(())
        }
        Err(e @ Error::NonInvertibleCollocation { .. }) if cmd.allow_singular => {
            doc.status = "non_invertible".into();
            doc.message = Some(e.to_string());
            write_json(&dir, "predictor.json", &doc)?;
            println!("non_invertible: {e}");
            Ok(())
        }
        Err(e) => Err(CliError::lib(stage, e)),
    }
}

// ---------------------------------------------------------------------------
// convergence

#[derive(Debug, Serialize)]
struct ConvergenceOutput<'a> {
    #[serde(flatten)]
    context: Context,
    labels: Option<Vec<f64>>,
    gamma: Option<f64>,
    records: &'a [ConvergenceRecord],
}

pub const CONVERGENCE_COLUMNS: [&str; 12] = [
    "method",
    "m",
    "effective_m",
    "error_fro",
    "error_uniform",
    "bound",
    "mv",
    "dot",
    "axpy",
    "predictor_error_uniform",
    "predictor_error_l2",
    "status",
];

pub fn convergence(cmd: &ConvergenceCmd) -> Result<(), CliError> {
    let g = load_graph(&cmd.graph)?;
    let phi = build_kernel(&cmd.kernel)?;
    let nodes = select_nodes(&cmd.nodes, g.graph.node_count())?;
    let m_values = cmd
        .m
        .clone()
        .or_else(|| cmd.m_range.clone())
        .map(|v| v.0)
        .ok_or_else(|| CliError::config("options", "give --m or --m-range"))?;
    let train = match &cmd.labels {
        Some(spec) => {
            let labels = load_labels(spec, nodes.len())?;
            Some(
                TrainingSet::new(nodes.clone(), labels, cmd.gamma)
                    .map_err(|e| CliError::lib("training set", e))?,
            )
        }
        None => None,
    };
    let mut cfg = StudyConfig::new(cmd.method.clone(), m_values);
    cfg.opts = cmd.solver.options();
    cfg.threads = cmd.solver.threads;
    let records = convergence_study(&g.laplacian, &phi, &nodes, train.as_ref(), &cfg)
        .map_err(|e| CliError::lib("convergence study", e))?;

    let dir = out_dir(&cmd.graph)?;
    let header: Vec<String> = CONVERGENCE_COLUMNS.iter().map(|s| s.to_string()).collect();
    let rows = records.iter().map(|r| {
        vec![
            r.method.to_string(),
            r.m.to_string(),
            r.effective_m.to_string(),
            opt_num(r.error_fro),
            opt_num(r.error_uniform),
            opt_num(r.bound),
            r.mv.to_string(),
            r.dot.to_string(),
            r.axpy.to_string(),
            opt_num(r.predictor_error_uniform),
            opt_num(r.predictor_error_l2),
            r.status.clone(),
        ]
    });
    write_csv(&dir, "convergence.csv", &header, rows)?;
    write_json(
        &dir,
        "convergence.json",
        &ConvergenceOutput {
            context: Context::new(&g, &phi, &nodes),
            labels: train.as_ref().map(|t| t.labels().to_vec()),
            gamma: train.as_ref().map(|t| t.gamma()),
            records: &records,
        },
    )?;
    let failed = records.iter().filter(|r| r.status != "ok").count();
    println!("{} records ({failed} not ok)", records.len());
    Ok(())
}

// ---------------------------------------------------------------------------
// spectrum

#[derive(Debug, Serialize)]
struct Eigenvalue {
    re: f64,
    im: f64,
}

#[derive(Debug, Serialize)]
struct SpectrumEntry {
    method: Method,
    m: usize,
    status: String,
    symmetry_defect: f64,
    norm: f64,
    min_real: Option<f64>,
    max_abs_imag: Option<f64>,
    eigenvalues: Vec<Eigenvalue>,
}

#[derive(Debug, Serialize)]
struct SpectrumOutput {
    #[serde(flatten)]
    context: Context,
    records: Vec<SpectrumEntry>,
}

pub fn spectrum(cmd: &SpectrumCmd) -> Result<(), CliError> {
    let g = load_graph(&cmd.graph)?;
    let phi = build_kernel(&cmd.kernel)?;
    let nodes = select_nodes(&cmd.nodes, g.graph.node_count())?;
    if cmd.m == 0 {
        return Err(CliError::config("options", "--m must be >= 1"));
    }
    let recs = collocation_spectrum_study(
        &g.laplacian,
        &phi,
        &nodes,
        cmd.m,
        &cmd.method,
        cmd.solver.options(),
    )
    .map_err(|e| CliError::lib("spectrum study", e))?;

    let dir = out_dir(&cmd.graph)?;
    let header: Vec<String> = ["method", "m", "index", "re", "im"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows = recs.iter().flat_map(|r| {
        r.eigenvalues.iter().enumerate().map(move |(k, z)| {
            vec![
                r.method.to_string(),
                r.m.to_string(),
                k.to_string(),
                num(z.re),
                num(z.im),
            ]
        })
    });
    write_csv(&dir, "spectrum.csv", &header, rows)?;
    let entries: Vec<SpectrumEntry> = recs
        .iter()
        .map(|r| {
            let ok = !r.eigenvalues.is_empty();
            println!(
                "{}: min re={} max |im|={} {}",
                r.method,
                if ok { num(r.min_real()) } else { "-".into() },
                if ok {
                    num(r.max_abs_imag())
                } else {
                    "-".into()
                },
                r.status
            );
            SpectrumEntry {
                method: r.method,
                m: r.m,
                status: r.status.clone(),
                symmetry_defect: r.symmetry_defect,
                norm: r.norm,
                min_real: ok.then(|| r.min_real()),
                max_abs_imag: ok.then(|| r.max_abs_imag()),
                eigenvalues: r
                    .eigenvalues
                    .iter()
                    .map(|z| Eigenvalue { re: z.re, im: z.im })
                    .collect(),
            }
        })
        .collect();
    write_json(
        &dir,
        "spectrum.json",
        &SpectrumOutput {
            context: Context::new(&g, &phi, &nodes),
            records: entries,
        },
    )?;
    Ok(())
}

// ---------------------------------------------------------------------------
// graph-info

#[derive(Debug, Serialize)]
struct GraphInfo {
    graph: String,
    n: usize,
    edges: usize,
    components: usize,
    laplacian: LaplacianKind,
    nnz: usize,
    lambda_max: f64,
    min_degree: f64,
    max_degree: f64,
    total_weight: f64,
}

pub fn graph_info(cmd: &GraphInfoCmd) -> Result<(), CliError> {
    let g = load_graph(&cmd.graph)?;
    let deg = g.graph.degrees();
    let info = GraphInfo {
        graph: g.spec.clone(),
        n: g.graph.node_count(),
        edges: g.graph.edges().len(),
        components: g.graph.component_count(),
        laplacian: g.kind,
        nnz: g.laplacian.nnz(),
        lambda_max: g.laplacian.spectral_upper_bound(),
        min_degree: deg.iter().copied().fold(f64::INFINITY, f64::min),
        max_degree: deg.iter().copied().fold(0.0, f64::max),
        total_weight: g.graph.edges().iter().map(|e| e.w).sum(),
    };
    let text = serde_json::to_string_pretty(&info).map_err(|e| CliError::io("graph info", e))?;
    println!("{text}");
    if let Some(dir) = &cmd.graph.out {
        ensure_dir(dir)?;
        write_json(dir, "graph_info.json", &info)?;
    }
    Ok(())
}
