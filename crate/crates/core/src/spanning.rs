//! Trees realized in a space, and minimal spanning trees under the intrinsic metric.

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::Result;
use crate::space::{Space, SurfacePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Terminal,
    Steiner,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeVertex {
    pub point: SurfacePoint,
    pub role: Role,
}

/// A tree network with straight (geodesic) edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tree {
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<(usize, usize)>,
    pub edge_lengths: Vec<f64>,
    pub total_length: f64,
}

impl Tree {
    /// Builds a tree whose edge lengths are the intrinsic distances in `space`.
    pub(crate) fn with_metric(space: &Space, vertices: Vec<TreeVertex>, edges: Vec<(usize, usize)>) -> Self {
        let edge_lengths: Vec<f64> = edges
            .iter()
            .map(|&(a, b)| space.metric(&vertices[a].point, &vertices[b].point))
            .collect();
        Self::with_lengths(vertices, edges, edge_lengths)
    }

    pub(crate) fn with_lengths(vertices: Vec<TreeVertex>, edges: Vec<(usize, usize)>, edge_lengths: Vec<f64>) -> Self {
        let total_length = edge_lengths.iter().sum();
        Tree { vertices, edges, edge_lengths, total_length }
    }

    pub fn terminal_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.role == Role::Terminal).count()
    }

    pub fn steiner_count(&self) -> usize {
        self.vertices.len() - self.terminal_count()
    }

    /// Connected with `|V| - 1` edges.
    pub fn is_spanning_tree(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 || self.edges.len() + 1 != n {
            return false;
        }
        let mut uf = UnionFind::new(n);
        self.edges.iter().all(|&(a, b)| a < n && b < n && uf.union(a, b))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }
}

/// Minimal spanning tree of `points` under the intrinsic metric of `space`.
///
/// Ties between equal-length edges go to the lexicographically smaller index pair.
pub fn mst(space: &Space, points: &[SurfacePoint]) -> Result<Tree> {
    let points = space.distinct_points(points, 2)?;
    Ok(mst_canonical(space, &points))
}

/// Kruskal over the complete graph; `points` must already be canonical.
pub(crate) fn mst_canonical(space: &Space, points: &[SurfacePoint]) -> Tree {
    let n = points.len();
    let mut candidates = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            candidates.push((space.metric(&points[i], &points[j]), i, j));
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut uf = UnionFind::new(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut lengths = Vec::with_capacity(n.saturating_sub(1));
    for (len, i, j) in candidates {
        if uf.union(i, j) {
            edges.push((i, j));
            lengths.push(len);
            if edges.len() + 1 == n {
                break;
            }
        }
    }
    let vertices = points
        .iter()
        .map(|&point| TreeVertex { point, role: Role::Terminal })
        .collect();
    Tree::with_lengths(vertices, edges, lengths)
}

/// Length of the minimal spanning tree of canonical points.
pub(crate) fn mst_length(space: &Space, points: &[SurfacePoint]) -> f64 {
    mst_canonical(space, points).total_length
}
