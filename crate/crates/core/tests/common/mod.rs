#![allow(dead_code)]

use graphkrylov::graph::{build_laplacian, bunny_like_cloud, proximity_graph, Edge, Graph};
use graphkrylov::graph::{BUNNY_LIKE_RADIUS, BUNNY_LIKE_SEED};
use graphkrylov::rng::{uniform, uniform_below, ExperimentRng};
use graphkrylov::{KernelFunction, LaplacianKind, SparseSymMatrix};

/// Connected graph on `n` nodes: a random spanning tree plus extra random
/// edges, weights uniform in `[0.5, 2)`.
pub fn random_connected_graph(rng: &mut ExperimentRng, n: usize, extra: usize) -> Graph {
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for v in 1..n {
        let u = uniform_below(rng, v as u64) as usize;
        seen.insert((u, v));
        edges.push(Edge {
            i: u,
            j: v,
            w: 0.5 + 1.5 * uniform(rng),
        });
    }
    for _ in 0..extra {
        let a = uniform_below(rng, n as u64) as usize;
        let b = uniform_below(rng, n as u64) as usize;
        let key = (a.min(b), a.max(b));
        if a == b || !seen.insert(key) {
            continue;
        }
        edges.push(Edge {
            i: key.0,
            j: key.1,
            w: 0.5 + 1.5 * uniform(rng),
        });
    }
    Graph::new(n, edges).expect("valid random graph")
}

pub fn random_kind(rng: &mut ExperimentRng) -> LaplacianKind {
    if uniform_below(rng, 2) == 0 {
        LaplacianKind::Standard
    } else {
        LaplacianKind::Normalized
    }
}

/// Random positive kernel whose dynamic range on `[0, Λ]` stays moderate.
pub fn random_positive_kernel(rng: &mut ExperimentRng, lambda_max: f64) -> KernelFunction {
    if uniform_below(rng, 2) == 0 {
        let t = (0.05 + 19.95 * uniform(rng)) / lambda_max;
        KernelFunction::diffusion(t).unwrap()
    } else {
        let eps = 0.01 + 0.99 * uniform(rng);
        let s = 0.5 + 2.5 * uniform(rng);
        KernelFunction::spline(eps, s).unwrap()
    }
}

/// Normalized Laplacian of the 900-node synthetic proximity graph.
pub fn bunny_like_laplacian() -> SparseSymMatrix {
    let pts = bunny_like_cloud(900, BUNNY_LIKE_SEED);
    let g = proximity_graph(&pts, BUNNY_LIKE_RADIUS).unwrap();
    build_laplacian(&g, LaplacianKind::Normalized)
}
