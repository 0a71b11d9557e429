//! Seeded stand-in for a 2D projected "bunny" point cloud.
//!
//! Points are drawn inside a silhouette made of four ellipses (body, head and
//! two ears). A fraction of them is sampled uniformly over the silhouette, the
//! rest from Gaussian clusters centred inside it; cluster draws that leave the
//! silhouette are redrawn. With [`BUNNY_LIKE_RADIUS`] the default 900-point
//! cloud yields a connected proximity graph with several thousand edges.

use crate::rng::{self, ExperimentRng};

/// Seed of the reference 900-point cloud used by the experiments.
pub const BUNNY_LIKE_SEED: u64 = 2023;
/// Proximity radius matching the cloud's scale.
pub const BUNNY_LIKE_RADIUS: f64 = 0.01;

/// `(cx, cy, ax, ay)`: centre and half axes.
const SILHOUETTE: [(f64, f64, f64, f64); 4] = [
    (0.000, 0.000, 0.075, 0.050),
    (0.065, 0.040, 0.032, 0.028),
    (0.060, 0.095, 0.010, 0.036),
    (0.085, 0.090, 0.009, 0.030),
];

const BBOX: (f64, f64, f64, f64) = (-0.076, 0.095, -0.051, 0.132);

const CLUSTERS: [(f64, f64); 5] = [
    (-0.040, -0.015),
    (0.010, 0.020),
    (0.030, -0.030),
    (0.070, 0.045),
    (-0.055, 0.020),
];
const CLUSTER_SIGMA: f64 = 0.012;
const UNIFORM_FRACTION: f64 = 0.75;

fn inside(x: f64, y: f64) -> bool {
    SILHOUETTE.iter().any(|&(cx, cy, ax, ay)| {
        let u = (x - cx) / ax;
        let v = (y - cy) / ay;
        u * u + v * v <= 1.0
    })
}

fn uniform_point(rng: &mut ExperimentRng) -> [f64; 2] {
    let (x0, x1, y0, y1) = BBOX;
    loop {
        let x = x0 + (x1 - x0) * rng::uniform(rng);
        let y = y0 + (y1 - y0) * rng::uniform(rng);
        if inside(x, y) {
            return [x, y];
        }
    }
}

fn cluster_point(rng: &mut ExperimentRng) -> [f64; 2] {
    let (cx, cy) = CLUSTERS[rng::uniform_below(rng, CLUSTERS.len() as u64) as usize];
    loop {
        let x = cx + CLUSTER_SIGMA * rng::normal(rng);
        let y = cy + CLUSTER_SIGMA * rng::normal(rng);
        if inside(x, y) {
            return [x, y];
        }
    }
}

/// `n` points of the synthetic silhouette for the given seed.
pub fn bunny_like_cloud(n: usize, seed: u64) -> Vec<[f64; 2]> {
    let mut rng = rng::seeded(seed);
    (0..n)
        .map(|_| {
            if rng::uniform(&mut rng) < UNIFORM_FRACTION {
                uniform_point(&mut rng)
            } else {
                cluster_point(&mut rng)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::proximity_graph;

    #[test]
    fn reference_cloud_shape() {
        let pts = bunny_like_cloud(900, BUNNY_LIKE_SEED);
        assert_eq!(pts.len(), 900);
        assert!(pts.iter().all(|p| inside(p[0], p[1])));
        assert_eq!(pts, bunny_like_cloud(900, BUNNY_LIKE_SEED));
        let g = proximity_graph(&pts, BUNNY_LIKE_RADIUS).unwrap();
        let m = g.edges().len();
        assert!((5000..=10000).contains(&m), "edge count {m}");
        assert_eq!(g.component_count(), 1);
    }
}
