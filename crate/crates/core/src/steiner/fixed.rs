use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::fermat::fermat_point;
use super::topology::Topology;
use crate::error::{Error, Result};
use crate::space::Vec2;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_SWEEPS: usize = 100_000;

/// Relative floor on edge lengths used as weights in the joint step.
const WEIGHT_FLOOR: f64 = 1e-12;

/// Optimal Steiner vertex positions for one topology.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedTopologySolution {
    pub steiner: Vec<[f64; 2]>,
    pub length: f64,
    pub sweeps: usize,
}

impl FixedTopologySolution {
    pub fn steiner_points(&self) -> Vec<Vec2> {
        self.steiner.iter().map(|p| Vec2::new(p[0], p[1])).collect()
    }
}

struct Network<'a> {
    topo: &'a Topology,
    adjacency: Vec<Vec<usize>>,
    positions: Vec<Vec2>,
    weight_floor: f64,
}

impl<'a> Network<'a> {
    fn length(&self, positions: &[Vec2]) -> f64 {
        self.topo
            .edges()
            .iter()
            .map(|&(a, b)| (positions[a] - positions[b]).norm())
            .sum()
    }

    /// Moves each Steiner vertex in turn to the Fermat point of its neighbours.
    fn sweep(&mut self) {
        for s in self.topo.terminals()..self.topo.vertex_count() {
            let nb = &self.adjacency[s];
            self.positions[s] = fermat_point(self.positions[nb[0]], self.positions[nb[1]], self.positions[nb[2]]);
        }
    }

    /// Moves all Steiner vertices at once to the minimizer of the weighted sum of squared
    /// edge lengths, weights `1 / |e|` (or unit weights). Unlike single-vertex moves this
    /// can translate coincident Steiner vertices together.
    fn joint_step(&self, unit_weights: bool) -> Option<Vec<Vec2>> {
        let n = self.topo.terminals();
        let m = self.topo.steiner_count();
        let mut matrix = DMatrix::<f64>::zeros(m, m);
        let mut rhs_x = DVector::<f64>::zeros(m);
        let mut rhs_y = DVector::<f64>::zeros(m);
        for (row, s) in (n..n + m).enumerate() {
            for &nb in &self.adjacency[s] {
                let w = if unit_weights {
                    1.0
                } else {
                    1.0 / (self.positions[s] - self.positions[nb]).norm().max(self.weight_floor)
                };
                matrix[(row, row)] += w;
                if nb >= n {
                    matrix[(row, nb - n)] -= w;
                } else {
                    rhs_x[row] += w * self.positions[nb].x;
                    rhs_y[row] += w * self.positions[nb].y;
                }
            }
        }
        let lu = matrix.lu();
        let xs = lu.solve(&rhs_x)?;
        let ys = lu.solve(&rhs_y)?;
        let mut positions = self.positions.clone();
        for k in 0..m {
            if !(xs[k].is_finite() && ys[k].is_finite()) {
                return None;
            }
            positions[n + k] = Vec2::new(xs[k], ys[k]);
        }
        Some(positions)
    }
}

/// Minimizes total edge length over the Steiner vertex positions of `topo`.
///
/// Gauss-Seidel sweeps move each Steiner vertex to the Fermat point of its three
/// neighbours; when a sweep gains less than `tol`, a joint reweighted least-squares
/// step is tried before declaring convergence. Steiner vertices may land on terminals
/// or on each other.
pub fn optimize_fixed_topology(terminals: &[Vec2], topo: &Topology, tol: f64) -> Result<FixedTopologySolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if terminals.len() != topo.terminals() {
        return Err(Error::InvalidArgument(format!(
            "topology has {} terminals but {} were given",
            topo.terminals(),
            terminals.len()
        )));
    }
    super::check_distinct(terminals)?;
    let scale = super::diameter(terminals);

    let mut network = Network {
        topo,
        adjacency: topo.adjacency(),
        positions: terminals.iter().copied().chain(std::iter::repeat_n(Vec2::zeros(), topo.steiner_count())).collect(),
        weight_floor: WEIGHT_FLOOR * scale,
    };
    if let Some(start) = network.joint_step(true) {
        network.positions = start;
    }

    let mut length = network.length(&network.positions);
    for sweep in 1..=MAX_SWEEPS {
        network.sweep();
        let swept = network.length(&network.positions);
        if length - swept < tol {
            let joint = network
                .joint_step(false)
                .map(|p| (network.length(&p), p))
                .filter(|(l, _)| swept - l >= tol);
            match joint {
                Some((l, p)) => {
                    network.positions = p;
                    length = l;
                    continue;
                }
                None => {
                    return Ok(FixedTopologySolution {
                        steiner: network.positions[topo.terminals()..].iter().map(|p| [p.x, p.y]).collect(),
                        length: swept,
                        sweeps: sweep,
                    });
                }
            }
        }
        length = swept;
    }
    Err(Error::NotConverged { iterations: MAX_SWEEPS, best: length })
}
