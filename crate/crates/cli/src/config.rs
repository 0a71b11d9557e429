//! Command-line options and their conversion into library inputs.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use graphkrylov::graph::{
    build_laplacian, bunny_like_cloud, parse_points_csv, path_graph, proximity_graph, Graph,
    BUNNY_LIKE_RADIUS, BUNNY_LIKE_SEED,
};
use graphkrylov::rng::{sample_nodes, seeded, uniform_below};
use graphkrylov::{KernelFunction, LaplacianKind, Method, SparseSymMatrix};
use serde::Serialize;

use crate::error::CliError;

/// Number of points of the synthetic cloud.
pub const SYNTHETIC_POINTS: usize = 900;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiKind {
    Diffusion,
    Spline,
}

/// Graph, Laplacian and kernel options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Graph source: `path:N`, `synthetic[:SEED]`, `points:FILE` (CSV of
    /// x,y rows, joined within `--radius`) or `edges:FILE` (`i j [w]` lines).
    #[arg(long)]
    pub graph: String,

    #[arg(long, value_parser = parse_laplacian, default_value = "normalized")]
    pub laplacian: LaplacianKind,

    /// Connection radius for `points:` and `synthetic` graphs.
    #[arg(long)]
    pub radius: Option<f64>,

    /// Write outputs here (created if missing); defaults to the current
    /// directory, except for `graph-info`, which then only prints.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[arg(long, value_enum, default_value = "diffusion")]
    pub phi: PhiKind,

    /// Diffusion time.
    #[arg(long)]
    pub t: Option<f64>,

    /// Spline shift.
    #[arg(long)]
    pub eps: Option<f64>,

    /// Spline exponent.
    #[arg(long)]
    pub s: Option<f64>,
}

/// Sampling nodes `W`: an explicit list or a seeded sample.
#[derive(Debug, Clone, Args)]
pub struct NodeArgs {
    /// Comma separated node indices.
    #[arg(long, value_delimiter = ',', conflicts_with = "sample")]
    pub nodes: Option<Vec<usize>>,

    /// Number of nodes to draw at random.
    #[arg(long)]
    pub sample: Option<usize>,

    /// Seed for `--sample`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Method names accepted on the command line; `exact` is the dense oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Exact,
    Krylov(Method),
}

impl MethodChoice {
    pub fn name(self) -> String {
        match self {
            Self::Exact => "exact".into(),
            Self::Krylov(m) => m.to_string(),
        }
    }
}

pub fn parse_method(s: &str) -> Result<MethodChoice, String> {
    if s.trim().eq_ignore_ascii_case("exact") {
        return Ok(MethodChoice::Exact);
    }
    s.parse::<Method>()
        .map(MethodChoice::Krylov)
        .map_err(|e| e.to_string())
}

pub fn parse_krylov_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

fn parse_laplacian(s: &str) -> Result<LaplacianKind, String> {
    s.parse().map_err(|e: graphkrylov::Error| e.to_string())
}

/// Parsed list of iteration counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MValues(pub Vec<usize>);

/// `a..b` (inclusive) or a comma separated list.
pub fn parse_m_values(s: &str) -> Result<MValues, String> {
    let s = s.trim();
    let values: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: usize = a
            .trim()
            .parse()
            .map_err(|_| format!("bad range start in `{s}`"))?;
        let b: usize = b
            .trim()
            .parse()
            .map_err(|_| format!("bad range end in `{s}`"))?;
        if a > b {
            return Err(format!("empty range `{s}`"));
        }
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|v| {
                v.trim()
                    .parse()
                    .map_err(|_| format!("bad value `{v}` in `{s}`"))
            })
            .collect::<Result<_, _>>()?
    };
    if values.is_empty() || values.contains(&0) {
        return Err("iteration counts must be >= 1".into());
    }
    Ok(MValues(values))
}

/// Loaded graph with its Laplacian.
pub struct GraphInput {
    pub spec: String,
    pub graph: Graph,
    pub laplacian: SparseSymMatrix,
    pub kind: LaplacianKind,
}

fn read_file(stage: &'static str, path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::config(stage, format!("cannot read {}: {e}", path.display())))
}

pub fn load_graph(args: &GraphArgs) -> Result<GraphInput, CliError> {
    let stage = "graph";
    let spec = args.graph.trim();
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let graph = match kind {
        "path" => {
            let n: usize = rest
                .parse()
                .map_err(|_| CliError::config(stage, format!("bad path size in `{spec}`")))?;
            if n == 0 {
                return Err(CliError::config(stage, "path needs at least one node"));
            }
            path_graph(n)
        }
        "synthetic" => {
            let seed = if rest.is_empty() {
                BUNNY_LIKE_SEED
            } else {
                rest.parse()
                    .map_err(|_| CliError::config(stage, format!("bad seed in `{spec}`")))?
            };
            let pts = bunny_like_cloud(SYNTHETIC_POINTS, seed);
            proximity_graph(&pts, args.radius.unwrap_or(BUNNY_LIKE_RADIUS))
                .map_err(|e| CliError::lib(stage, e))?
        }
        "points" => {
            let radius = args.radius.ok_or_else(|| {
                CliError::config(stage, "`points:` graphs need --radius")
            })?;
            let text = read_file(stage, Path::new(rest))?;
            let pts = parse_points_csv(&text).map_err(|e| CliError::lib(stage, e))?;
            proximity_graph(&pts, radius).map_err(|e| CliError::lib(stage, e))?
        }
        "edges" => {
            let text = read_file(stage, Path::new(rest))?;
            Graph::from_edge_list(&text, 0).map_err(|e| CliError::lib(stage, e))?
        }
        _ => {
            return Err(CliError::config(
                stage,
                format!("unknown graph source `{spec}` (expected path:N, synthetic[:SEED], points:FILE or edges:FILE)"),
            ))
        }
    };
    if graph.node_count() == 0 {
        return Err(CliError::config(stage, "graph has no nodes"));
    }
    let laplacian = build_laplacian(&graph, args.laplacian);
    Ok(GraphInput {
        spec: spec.to_string(),
        graph,
        laplacian,
        kind: args.laplacian,
    })
}

pub fn build_kernel(args: &KernelArgs) -> Result<KernelFunction, CliError> {
    let stage = "kernel function";
    match args.phi {
        PhiKind::Diffusion => {
            let t = args
                .t
                .ok_or_else(|| CliError::config(stage, "--phi diffusion needs --t"))?;
            KernelFunction::diffusion(t).map_err(|e| CliError::config(stage, e.to_string()))
        }
        PhiKind::Spline => {
            let (Some(eps), Some(s)) = (args.eps, args.s) else {
                return Err(CliError::config(stage, "--phi spline needs --eps and --s"));
            };
            KernelFunction::spline(eps, s).map_err(|e| CliError::config(stage, e.to_string()))
        }
    }
}

pub fn select_nodes(args: &NodeArgs, n: usize) -> Result<Vec<usize>, CliError> {
    let stage = "sampling nodes";
    let nodes = match (&args.nodes, args.sample) {
        (Some(list), _) => list.clone(),
        (None, Some(count)) => {
            sample_nodes(n, count, args.seed).map_err(|e| CliError::config(stage, e.to_string()))?
        }
        (None, None) => return Err(CliError::config(stage, "give --nodes or --sample")),
    };
    if nodes.is_empty() {
        return Err(CliError::config(stage, "no sampling nodes"));
    }
    let mut seen = std::collections::HashSet::new();
    for &v in &nodes {
        if v >= n {
            return Err(CliError::config(
                stage,
                format!("node {v} out of range for {n} nodes"),
            ));
        }
        if !seen.insert(v) {
            return Err(CliError::config(stage, format!("node {v} appears twice")));
        }
    }
    Ok(nodes)
}

/// Labels: `FILE` (numbers separated by whitespace or commas),
/// `random:SEED` (uniform over {0, 1}) or `const:VALUE`.
pub fn load_labels(spec: &str, count: usize) -> Result<Vec<f64>, CliError> {
    let stage = "labels";
    if let Some(seed) = spec.strip_prefix("random:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| CliError::config(stage, format!("bad seed in `{spec}`")))?;
        let mut rng = seeded(seed);
        return Ok((0..count)
            .map(|_| uniform_below(&mut rng, 2) as f64)
            .collect());
    }
    if let Some(v) = spec.strip_prefix("const:") {
        let v: f64 = v
            .parse()
            .map_err(|_| CliError::config(stage, format!("bad value in `{spec}`")))?;
        return Ok(vec![v; count]);
    }
    let text = read_file(stage, Path::new(spec))?;
    let values = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::config(stage, format!("bad label `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != count {
        return Err(CliError::config(
            stage,
            format!("expected {count} labels, found {}", values.len()),
        ));
    }
    Ok(values)
}
