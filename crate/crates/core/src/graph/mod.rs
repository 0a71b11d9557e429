//! Graphs, Laplacians and the sparse operator interface used by the Krylov
//! methods.

mod block;
mod laplacian;
mod synthetic;

pub use block::{unit_block, BlockVector, OpCounters};
pub use laplacian::{build_laplacian, LaplacianKind, SparseSymMatrix};
pub use synthetic::{bunny_like_cloud, BUNNY_LIKE_RADIUS, BUNNY_LIKE_SEED};

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Undirected weighted edge between two distinct nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// Simple undirected graph with positive edge weights.
#[derive(Debug, Clone)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Edge>,
    coords: Option<Vec<[f64; 2]>>,
}

impl Graph {
    /// Validates and builds a graph. Rejects self loops, duplicate undirected
    /// edges, out-of-range endpoints and non-positive weights.
    pub fn new(node_count: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for e in &edges {
            for idx in [e.i, e.j] {
                if idx >= node_count {
                    return Err(Error::IndexOutOfRange {
                        index: idx,
                        n: node_count,
                    });
                }
            }
            if e.i == e.j {
                return Err(Error::InvalidInput(format!("self loop at node {}", e.i)));
            }
            if !(e.w > 0.0 && e.w.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "edge ({}, {}) has non-positive weight {}",
                    e.i, e.j, e.w
                )));
            }
            if !seen.insert((e.i.min(e.j), e.i.max(e.j))) {
                return Err(Error::InvalidInput(format!(
                    "duplicate edge ({}, {})",
                    e.i, e.j
                )));
            }
        }
        Ok(Self {
            node_count,
            edges,
            coords: None,
        })
    }

    pub fn with_coords(mut self, coords: Vec<[f64; 2]>) -> Result<Self> {
        if coords.len() != self.node_count {
            return Err(Error::DimensionMismatch {
                expected: self.node_count,
                found: coords.len(),
            });
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn coords(&self) -> Option<&[[f64; 2]]> {
        self.coords.as_deref()
    }

    /// Weighted degree of every node.
    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.node_count];
        for e in &self.edges {
            d[e.i] += e.w;
            d[e.j] += e.w;
        }
        d
    }

    /// Component label per node; labels are numbered by first appearance.
    pub fn connected_components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.node_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.i), find(&mut parent, e.j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut label = vec![usize::MAX; self.node_count];
        let mut next = 0;
        let mut out = vec![0; self.node_count];
        for v in 0..self.node_count {
            let root = find(&mut parent, v);
            if label[root] == usize::MAX {
                label[root] = next;
                next += 1;
            }
            out[v] = label[root];
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.connected_components()
            .into_iter()
            .max()
            .map_or(0, |m| m + 1)
    }

    /// Parses the edge-list text format: one `i j [w]` triple per line,
    /// whitespace separated, 0-based, `#` starts a comment. The node count is
    /// `max(min_nodes, largest index + 1)`.
    pub fn from_edge_list(text: &str, min_nodes: usize) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max_index = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 && fields.len() != 3 {
                return Err(parse_err(format!(
                    "expected `i j [w]`, found {} fields",
                    fields.len()
                )));
            }
            let idx = |s: &str| {
                s.parse::<usize>()
                    .map_err(|e| parse_err(format!("bad node index `{s}`: {e}")))
            };
            let i = idx(fields[0])?;
            let j = idx(fields[1])?;
            let w = match fields.get(2) {
                Some(s) => s
                    .parse::<f64>()
                    .map_err(|e| parse_err(format!("bad weight `{s}`: {e}")))?,
                None => 1.0,
            };
            max_index = Some(max_index.unwrap_or(0).max(i).max(j));
            edges.push(Edge { i, j, w });
        }
        let n = max_index.map_or(0, |m| m + 1).max(min_nodes);
        Self::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for e in &self.edges {
            s.push_str(&format!("{} {} {}\n", e.i, e.j, e.w));
        }
        s
    }
}

/// Path graph `0 - 1 - ... - (n-1)` with unit weights.
pub fn path_graph(n: usize) -> Graph {
    let edges = (1..n)
        .map(|i| Edge {
            i: i - 1,
            j: i,
            w: 1.0,
        })
        .collect();
    Graph::new(n, edges).expect("path graph is valid")
}

/// Unweighted graph joining every pair of points closer than `radius`
/// (strict inequality).
pub fn proximity_graph(points: &[[f64; 2]], radius: f64) -> Result<Graph> {
    if !(radius > 0.0) {
        return Err(Error::InvalidInput(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let r2 = radius * radius;
    let mut edges = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let dx = points[i][0] - points[j][0];
            let dy = points[i][1] - points[j][1];
            if dx * dx + dy * dy < r2 {
                edges.push(Edge { i, j, w: 1.0 });
            }
        }
    }
    Graph::new(points.len(), edges)?.with_coords(points.to_vec())
}

/// Parses a point cloud CSV: one `x,y` pair per line. Blank lines and lines
/// starting with `#` are skipped, as is a leading `x,y` header.
pub fn parse_points_csv(text: &str) -> Result<Vec<[f64; 2]>> {
    let mut pts = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if lineno == 0 && line.eq_ignore_ascii_case("x,y") {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: lineno + 1,
            message,
        };
        let mut it = line.split(',').map(str::trim);
        let (Some(x), Some(y), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err("expected `x,y`".into()));
        };
        let p = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| parse_err(format!("bad coordinate `{s}`: {e}")))
        };
        pts.push([p(x)?, p(y)?]);
    }
    Ok(pts)
}
