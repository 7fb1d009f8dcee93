//! Steiner ratios of finite configurations, the search for small ratios, and numerical
//! checks of the ratio inequalities between a covering and its base.

mod repro;
mod search;
mod simplex;
mod theorem;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quotient::{smt_quotient, smt_upper_star};
use crate::space::{Space, SurfacePoint, Vec2};
use crate::spanning;
use crate::steiner::{self, DEFAULT_TOL};

pub use repro::{
    polygon_rows, repro, wide_angle_rows, PolygonRow, ReproOptions, ReproReport, SearchFloorRow, WideAngleRow,
};
pub use search::{search_inf, search_inf_with, SearchOptions, DEFAULT_ITERATIONS, DEFAULT_SHRINK_TOL};
pub use theorem::{verify_theorem, verify_theorem_with, TheoremReport, TheoremWitness, THEOREM_TOLERANCE};

/// Slack allowed on the bounds `1/2 <= sr <= 1`.
pub const RATIO_SLACK: f64 = 1e-9;
/// Additive slack in the continuity bound.
pub const CONTINUITY_SLACK: f64 = 1e-6;

/// Whether the reported Steiner tree length is exact or only an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SmtKind {
    Exact,
    UpperBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub restart: usize,
    pub sr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchMeta {
    pub seed: u64,
    pub restarts: usize,
    pub seeded_restarts: usize,
    pub iterations_per_restart: usize,
    pub total_iterations: usize,
    pub evaluations: usize,
    pub best_restart: usize,
    /// Restarts that improved the running minimum, in order.
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub space: Space,
    pub points: Vec<SurfacePoint>,
    pub smt: f64,
    pub mst: f64,
    pub sr: f64,
    pub kind: SmtKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchMeta>,
}

impl RatioReport {
    /// `1/2 <= sr <= 1` for exact values, `sr <= 1` for bounds.
    pub fn within_bounds(&self) -> bool {
        let upper = self.sr <= 1.0 + RATIO_SLACK;
        match self.kind {
            SmtKind::Exact => upper && self.sr >= 0.5 - RATIO_SLACK,
            SmtKind::UpperBound => upper,
        }
    }
}

/// Steiner tree length of canonical, distinct points, exact where a solver exists.
pub(crate) fn smt_value(space: &Space, points: &[SurfacePoint], mst: f64, tol: f64) -> Result<(f64, SmtKind)> {
    if points.len() == 2 {
        return Ok((mst, SmtKind::Exact));
    }
    match space {
        Space::Plane => {
            let plane: Vec<Vec2> = points.iter().filter_map(SurfacePoint::as_plane).collect();
            Ok((steiner::solve_plane(&plane, tol)?.length, SmtKind::Exact))
        }
        Space::Cone(cone) if cone.sheets().is_none() => {
            Ok((smt_upper_star(space, points)?.min(mst), SmtKind::UpperBound))
        }
        _ => Ok((smt_quotient(space, points, tol)?.length(), SmtKind::Exact)),
    }
}

/// `smt / mst` for at least two distinct points.
///
/// Cones whose angle is not `2π/k` get the certified upper bound `min(star, mst) / mst`.
pub fn steiner_ratio(space: &Space, points: &[SurfacePoint]) -> Result<RatioReport> {
    steiner_ratio_with(space, points, DEFAULT_TOL)
}

pub fn steiner_ratio_with(space: &Space, points: &[SurfacePoint], tol: f64) -> Result<RatioReport> {
    let points = space.distinct_points(points, 2)?;
    let mst = spanning::mst_length(space, &points);
    let (smt, kind) = smt_value(space, &points, mst, tol)?;
    Ok(RatioReport { space: *space, points, smt, mst, sr: smt / mst, kind, search: None })
}

/// One trial of the continuity bound
/// `|sr(M) - sr(M')| <= Σδ (1/mst(M') + smt(M)/(mst(M) mst(M'))) + slack`,
/// where `δ_i` is how far point `i` moved.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityTrial {
    pub sr_before: f64,
    pub sr_after: f64,
    pub displacement: f64,
    pub change: f64,
    pub bound: f64,
}

impl ContinuityTrial {
    pub fn holds(&self) -> bool {
        self.change <= self.bound
    }
}

pub fn continuity_trial(space: &Space, before: &[SurfacePoint], after: &[SurfacePoint]) -> Result<ContinuityTrial> {
    if before.len() != after.len() {
        return Err(Error::InvalidArgument(format!(
            "perturbed configuration has {} points, expected {}",
            after.len(),
            before.len()
        )));
    }
    let m = steiner_ratio(space, before)?;
    let m2 = steiner_ratio(space, after)?;
    let displacement = before
        .iter()
        .zip(after)
        .map(|(p, q)| space.distance(*p, *q))
        .sum::<Result<f64>>()?;
    let bound = displacement * (1.0 / m2.mst + m.smt / (m.mst * m2.mst)) + CONTINUITY_SLACK;
    Ok(ContinuityTrial { sr_before: m.sr, sr_after: m2.sr, displacement, change: (m.sr - m2.sr).abs(), bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn plane_equilateral() {
        let h = 3f64.sqrt() / 2.0;
        let pts = [SurfacePoint::xy(0.0, 0.0), SurfacePoint::xy(1.0, 0.0), SurfacePoint::xy(0.5, h)];
        let r = steiner_ratio(&Space::Plane, &pts).unwrap();
        assert_eq!(r.mst, 2.0);
        assert!((r.sr - h).abs() < 1e-12);
        assert_eq!(r.kind, SmtKind::Exact);
        assert!(r.within_bounds());
    }

    #[test]
    fn pairs_have_ratio_one() {
        let spaces = [
            Space::Plane,
            Space::cone_sheets(3).unwrap(),
            Space::cone_radians(7.0).unwrap(),
            Space::regular_tetrahedron(1.0).unwrap(),
        ];
        for space in spaces {
            let pts = match space {
                Space::Plane => [SurfacePoint::xy(0.0, 0.0), SurfacePoint::xy(0.3, 2.0)],
                Space::Cone(_) => [SurfacePoint::polar(1.0, 0.0), SurfacePoint::polar(2.0, 1.0)],
                Space::Disphenoid(_) => [SurfacePoint::on_face(0, [0.2, 0.3, 0.5]), SurfacePoint::on_face(3, [0.6, 0.2, 0.2])],
            };
            let r = steiner_ratio(&space, &pts).unwrap();
            assert_eq!(r.sr, 1.0, "{space}");
        }
    }

    #[test]
    fn wide_cone_triangle_is_a_bound() {
        let space = Space::cone_radians(3.0 * PI).unwrap();
        let pts: Vec<_> = (0..3).map(|i| SurfacePoint::polar(1.0, f64::from(i) * PI)).collect();
        let r = steiner_ratio(&space, &pts).unwrap();
        assert_eq!(r.kind, SmtKind::UpperBound);
        assert!((r.mst - 4.0).abs() < 1e-12);
        assert!((r.sr - 0.75).abs() < 1e-12);
    }

    #[test]
    fn continuity_trial_on_plane() {
        let a = [SurfacePoint::xy(0.0, 0.0), SurfacePoint::xy(1.0, 0.0), SurfacePoint::xy(0.2, 0.9)];
        let b = [SurfacePoint::xy(0.01, 0.0), SurfacePoint::xy(1.0, 0.02), SurfacePoint::xy(0.2, 0.9)];
        let t = continuity_trial(&Space::Plane, &a, &b).unwrap();
        assert!((t.displacement - 0.03).abs() < 1e-12);
        assert!(t.holds());
        assert!(continuity_trial(&Space::Plane, &a, &b[..2]).is_err());
    }
}
