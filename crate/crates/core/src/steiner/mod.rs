//! Steiner minimal trees in the Euclidean plane for small terminal sets.
//!
//! Every full topology is optimized numerically and the shortest realization wins;
//! degenerate Steiner vertices are merged only when the tree is built for output.

mod fermat;
mod fixed;
mod topology;

use std::sync::OnceLock;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;

pub use fermat::fermat_point;
pub use fixed::{optimize_fixed_topology, FixedTopologySolution, DEFAULT_TOL, MAX_SWEEPS};
pub use topology::{
    enumerate_full_topologies, full_topology_count, Topology, MAX_TOPOLOGY_TERMINALS, MIN_TOPOLOGY_TERMINALS,
};

use crate::error::{Error, Result};
use crate::space::{Space, SurfacePoint, Vec2, COINCIDENCE_EPS};
use crate::spanning::{Role, Tree, TreeVertex};

/// Steiner vertices closer than this (relative to the terminal diameter) to a
/// neighbour are merged into it in the output tree.
pub const MERGE_EPS: f64 = 1e-8;

pub(crate) fn diameter(points: &[Vec2]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.max((p - q).norm());
        }
    }
    best
}

pub(crate) fn check_distinct(points: &[Vec2]) -> Result<()> {
    for i in 0..points.len() {
        if !(points[i].x.is_finite() && points[i].y.is_finite()) {
            return Err(Error::InvalidPoint(format!("non-finite terminal {i}")));
        }
        for j in i + 1..points.len() {
            if (points[i] - points[j]).norm() <= COINCIDENCE_EPS {
                return Err(Error::DuplicatePoints { first: i, second: j });
            }
        }
    }
    Ok(())
}

fn cached_topologies(n: usize) -> Result<&'static [Topology]> {
    static CACHE: [OnceLock<Vec<Topology>>; MAX_TOPOLOGY_TERMINALS + 1] = [const { OnceLock::new() }; MAX_TOPOLOGY_TERMINALS + 1];
    let topologies = enumerate_full_topologies(n)?;
    Ok(CACHE[n].get_or_init(|| topologies).as_slice())
}

/// Shortest realization over all full topologies, before degenerate vertices are merged.
#[derive(Debug, Clone)]
pub(crate) struct PlaneSteiner {
    /// Terminals followed by Steiner vertices.
    pub positions: Vec<Vec2>,
    pub edges: Vec<(usize, usize)>,
    pub terminals: usize,
    pub length: f64,
}

impl PlaneSteiner {
    /// Merges Steiner vertices lying on a neighbour and returns the resulting plane points,
    /// roles and edges.
    pub fn merged(&self) -> (Vec<(Vec2, Role)>, Vec<(usize, usize)>) {
        let n = self.terminals;
        let total = self.positions.len();
        let eps = MERGE_EPS * diameter(&self.positions[..n]).max(f64::MIN_POSITIVE);
        let mut uf = UnionFind::new(total);
        for &(a, b) in &self.edges {
            if (a >= n || b >= n) && (self.positions[a] - self.positions[b]).norm() < eps {
                uf.union(a, b);
            }
        }
        // a class containing a terminal is represented by it, otherwise by its first Steiner vertex
        let mut class_index = vec![usize::MAX; total];
        let mut vertices = Vec::new();
        for v in 0..total {
            let root = uf.find(v);
            if class_index[root] == usize::MAX && (v < n || (0..n).all(|t| uf.find(t) != root)) {
                class_index[root] = vertices.len();
                let role = if v < n { Role::Terminal } else { Role::Steiner };
                vertices.push((self.positions[v], role));
            }
        }
        let mut edges = Vec::new();
        for &(a, b) in &self.edges {
            let (ca, cb) = (class_index[uf.find(a)], class_index[uf.find(b)]);
            if ca != cb {
                edges.push((ca.min(cb), ca.max(cb)));
            }
        }
        (vertices, edges)
    }
}

pub(crate) fn solve_plane(terminals: &[Vec2], tol: f64) -> Result<PlaneSteiner> {
    let n = terminals.len();
    if !(2..=MAX_TOPOLOGY_TERMINALS).contains(&n) {
        return Err(Error::TerminalCount { got: n, min: 2, max: MAX_TOPOLOGY_TERMINALS });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    check_distinct(terminals)?;
    if n == 2 {
        return Ok(PlaneSteiner {
            positions: terminals.to_vec(),
            edges: vec![(0, 1)],
            terminals: 2,
            length: (terminals[0] - terminals[1]).norm(),
        });
    }
    if n == 3 {
        let s = fermat_point(terminals[0], terminals[1], terminals[2]);
        let positions: Vec<Vec2> = terminals.iter().copied().chain([s]).collect();
        let length = terminals.iter().map(|t| (t - s).norm()).sum();
        return Ok(PlaneSteiner { positions, edges: vec![(0, 3), (1, 3), (2, 3)], terminals: 3, length });
    }
    let topologies = cached_topologies(n)?;
    let solutions: Vec<Result<FixedTopologySolution>> = if topologies.len() > 1 {
        topologies.par_iter().map(|t| optimize_fixed_topology(terminals, t, tol)).collect()
    } else {
        topologies.iter().map(|t| optimize_fixed_topology(terminals, t, tol)).collect()
    };
    let mut best: Option<(usize, FixedTopologySolution)> = None;
    for (index, solution) in solutions.into_iter().enumerate() {
        let solution = solution?;
        if best.as_ref().is_none_or(|(_, b)| solution.length < b.length) {
            best = Some((index, solution));
        }
    }
    let (index, solution) = best.expect("at least one topology");
    let topo = &topologies[index];
    Ok(PlaneSteiner {
        positions: terminals.iter().copied().chain(solution.steiner_points()).collect(),
        edges: topo.edges().to_vec(),
        terminals: n,
        length: solution.length,
    })
}

/// Steiner minimal tree of at most seven distinct plane terminals.
pub fn smt_plane(terminals: &[Vec2], tol: f64) -> Result<Tree> {
    let solution = solve_plane(terminals, tol)?;
    let (vertices, edges) = solution.merged();
    let vertices = vertices
        .into_iter()
        .map(|(p, role)| TreeVertex { point: SurfacePoint::from_vec(p), role })
        .collect();
    Ok(Tree::with_metric(&Space::Plane, vertices, edges))
}
