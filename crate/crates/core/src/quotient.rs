//! Steiner minimal trees on the cones `2π/k` and on the disphenoid, found by lifting.
//!
//! A tree in the base lifts to a tree of the same length in the plane once each
//! terminal is assigned a sheet; conversely every plane tree on lifted terminals
//! projects to a connecting network of the same length. So the base Steiner tree is
//! the shortest plane Steiner tree over all sheet assignments, with the first
//! terminal pinned to the identity sheet.

use rayon::prelude::*;
use serde::Serialize;

use crate::covering::{CoveringMap, DeckElement};
use crate::error::{Error, Result};
use crate::space::{Space, SurfacePoint, Vec2};
use crate::spanning::{self, Role, Tree, TreeVertex};
use crate::steiner::{self, PlaneSteiner};

/// Upper limit on the number of sheet assignments tried by [`smt_quotient`].
pub const ASSIGNMENT_CAP: usize = 10_000;
pub const MAX_QUOTIENT_TERMINALS: usize = 5;

/// Below this many assignments the search runs on the calling thread.
const PARALLEL_THRESHOLD: usize = 64;

/// One deck element per terminal, selecting which lift of it is used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SheetAssignment {
    pub deck: Vec<DeckElement>,
}

/// The base Steiner tree together with the plane tree it was projected from.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientSmt {
    pub tree: Tree,
    pub plane_tree: Tree,
    pub lifted_terminals: Vec<[f64; 2]>,
    pub assignment: SheetAssignment,
    /// Assignments whose plane Steiner tree was computed.
    pub assignments_evaluated: usize,
    /// Size of the enumerated assignment space before pruning.
    pub assignments_total: usize,
}

impl QuotientSmt {
    pub fn length(&self) -> f64 {
        self.tree.total_length
    }

    pub fn lifted_points(&self) -> Vec<Vec2> {
        self.lifted_terminals.iter().map(|p| Vec2::new(p[0], p[1])).collect()
    }
}

/// Steiner minimal tree on a cone of angle `2π/k` or on a disphenoid.
pub fn smt_quotient(space: &Space, terminals: &[SurfacePoint], tol: f64) -> Result<QuotientSmt> {
    let cover = match space {
        Space::Plane => {
            return Err(Error::InvalidArgument("the plane has no quotient pathway; use smt_plane".into()));
        }
        Space::Cone(cone) if cone.sheets().is_none() => {
            return Err(Error::UnsupportedCone(format!(
                "total angle {} is not of the form 2pi/k; use smt_upper_star for an upper bound",
                cone.total_angle()
            )));
        }
        _ => CoveringMap::for_space(space)?,
    };
    if !(2..=MAX_QUOTIENT_TERMINALS).contains(&terminals.len()) {
        return Err(Error::TerminalCount { got: terminals.len(), min: 2, max: MAX_QUOTIENT_TERMINALS });
    }
    let terminals = space.distinct_points(terminals, 2)?;
    let mst_base = spanning::mst_length(space, &terminals);
    let slack = 1e-9 * (1.0 + mst_base);
    let reach = mst_base + slack;

    let reps: Vec<Vec2> = terminals.iter().map(|x| cover.representative(x)).collect();
    let radius = reach + reps.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let anchor = reps[0];
    let mut candidates: Vec<Vec<(DeckElement, Vec2)>> = vec![vec![(cover.identity(), anchor)]];
    for x in &terminals[1..] {
        let lifts: Vec<_> = cover
            .lifts_with_deck(x, radius)
            .into_iter()
            .filter(|(_, p)| (p - anchor).norm() <= reach)
            .collect();
        candidates.push(lifts);
    }
    let total = candidates.iter().try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128));
    let total = match total {
        Some(t) if t <= ASSIGNMENT_CAP as u128 => t as usize,
        Some(t) => return Err(Error::TooManyAssignments { count: t, cap: ASSIGNMENT_CAP }),
        None => return Err(Error::TooManyAssignments { count: u128::MAX, cap: ASSIGNMENT_CAP }),
    };

    let lifted = |index: usize| -> Vec<(DeckElement, Vec2)> {
        let mut rest = index;
        candidates
            .iter()
            .map(|c| {
                let pick = c[rest % c.len()];
                rest /= c.len();
                pick
            })
            .collect()
    };
    // a tree through all lifts is at least as long as their diameter
    let admissible = |index: usize| -> Option<Vec<Vec2>> {
        let points: Vec<Vec2> = lifted(index).into_iter().map(|(_, p)| p).collect();
        (steiner::diameter(&points) <= reach).then_some(points)
    };
    let solve = |index: usize| -> Option<Result<(usize, PlaneSteiner)>> {
        admissible(index).map(|pts| steiner::solve_plane(&pts, tol).map(|s| (index, s)))
    };
    let solved: Vec<Result<(usize, PlaneSteiner)>> = if total > PARALLEL_THRESHOLD {
        (0..total).into_par_iter().filter_map(solve).collect()
    } else {
        (0..total).filter_map(solve).collect()
    };

    let mut best: Option<(usize, PlaneSteiner)> = None;
    let mut evaluated = 0;
    for result in solved {
        let (index, solution) = result?;
        evaluated += 1;
        if best.as_ref().is_none_or(|(_, b)| solution.length < b.length) {
            best = Some((index, solution));
        }
    }
    let (index, solution) = best.ok_or_else(|| {
        Error::InvalidArgument("no sheet assignment reaches within the spanning tree bound".into())
    })?;

    let picks = lifted(index);
    let (vertices, edges) = solution.merged();
    let plane_vertices: Vec<TreeVertex> = vertices
        .iter()
        .map(|&(p, role)| TreeVertex { point: SurfacePoint::from_vec(p), role })
        .collect();
    let plane_tree = Tree::with_metric(&Space::Plane, plane_vertices, edges.clone());
    let base_vertices: Vec<TreeVertex> = vertices
        .iter()
        .enumerate()
        .map(|(i, &(p, role))| {
            let point = if role == Role::Terminal { terminals[i] } else { cover.project(p) };
            TreeVertex { point, role }
        })
        .collect();
    let tree = Tree::with_lengths(base_vertices, edges, plane_tree.edge_lengths.clone());

    Ok(QuotientSmt {
        tree,
        plane_tree,
        lifted_terminals: picks.iter().map(|(_, p)| [p.x, p.y]).collect(),
        assignment: SheetAssignment { deck: picks.iter().map(|(g, _)| *g).collect() },
        assignments_evaluated: evaluated,
        assignments_total: total,
    })
}

/// Length of the star joining every terminal to the apex: an upper bound on the
/// Steiner tree length on a cone of any angle.
pub fn smt_upper_star(space: &Space, terminals: &[SurfacePoint]) -> Result<f64> {
    if !matches!(space, Space::Cone(_)) {
        return Err(Error::InvalidArgument(format!("star bound needs a cone, got {space}")));
    }
    terminals.iter().try_fold(0.0, |acc, p| match space.canonical(*p)? {
        SurfacePoint::Cone { r, .. } => Ok(acc + r),
        _ => unreachable!("canonical cone points are polar"),
    })
}
