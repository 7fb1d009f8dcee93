//! Regenerates the table of ratio bounds on cones wider than the plane, together with
//! search floors on the cones `2π/k` and on tetrahedra.

use std::f64::consts::PI;

use serde::Serialize;

use super::search::search_inf;
use super::{steiner_ratio, RatioReport, SmtKind};
use crate::error::Result;
use crate::quotient::smt_upper_star;
use crate::space::{Space, SurfacePoint};
use crate::spanning;

/// Slack on the floor `√3/2` below which no search result may fall.
pub const FLOOR_SLACK: f64 = 1e-3;
const PLANE_RATIO: f64 = 0.866_025_403_784_438_6;

/// Regular `k`-gon of radius `radius` on the cone of total angle `πk`: consecutive vertices
/// are `π` apart, so every spanning edge runs through the apex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolygonRow {
    pub k: u32,
    pub total_angle: f64,
    pub radius: f64,
    pub mst: f64,
    pub star_bound: f64,
    pub sr_bound: f64,
    /// `k / (2(k - 1))`.
    pub closed_form: f64,
}

/// Equilateral triple of radius 1 on a cone wider than `2π`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WideAngleRow {
    pub total_angle: f64,
    pub radius: f64,
    pub star_bound: f64,
    pub mst: f64,
    /// `2√3 r`, the spanning tree length of the same triple in the plane.
    pub plane_mst: f64,
    pub sr_bound: f64,
    pub below_plane_ratio: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchFloorRow {
    pub space: Space,
    pub terminals: usize,
    pub restarts: usize,
    pub seed: u64,
    pub best_sr: f64,
    pub floor: f64,
    pub above_floor: bool,
    pub attains_plane_ratio: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproReport {
    pub polygon_rows: Vec<PolygonRow>,
    /// Polygon rows for large `k`, showing the bound approach `1/2`.
    pub limit_rows: Vec<PolygonRow>,
    pub wide_angle_rows: Vec<WideAngleRow>,
    pub plane_equilateral: RatioReport,
    pub search_floors: Vec<SearchFloorRow>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproOptions {
    /// Restarts per search floor; zero skips the searches.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for ReproOptions {
    fn default() -> Self {
        ReproOptions { restarts: 20, seed: 1 }
    }
}

pub fn polygon_rows(ks: impl IntoIterator<Item = u32>) -> Result<Vec<PolygonRow>> {
    ks.into_iter()
        .map(|k| {
            let theta = PI * f64::from(k);
            let space = Space::cone_radians(theta)?;
            let radius = 1.0;
            let points: Vec<_> =
                (0..k).map(|i| SurfacePoint::polar(radius, theta * f64::from(i) / f64::from(k))).collect();
            let points = space.distinct_points(&points, 2)?;
            let mst = spanning::mst_length(&space, &points);
            let star_bound = smt_upper_star(&space, &points)?;
            Ok(PolygonRow {
                k,
                total_angle: theta,
                radius,
                mst,
                star_bound,
                sr_bound: star_bound / mst,
                closed_form: f64::from(k) / (2.0 * f64::from(k - 1)),
            })
        })
        .collect()
}

pub fn wide_angle_rows(angles: impl IntoIterator<Item = f64>) -> Result<Vec<WideAngleRow>> {
    angles
        .into_iter()
        .map(|theta| {
            let space = Space::cone_radians(theta)?;
            let radius = 1.0;
            let points: Vec<_> = (0..3).map(|i| SurfacePoint::polar(radius, theta * f64::from(i) / 3.0)).collect();
            let report = steiner_ratio(&space, &points)?;
            let star_bound = smt_upper_star(&space, &points)?;
            Ok(WideAngleRow {
                total_angle: theta,
                radius,
                star_bound,
                mst: report.mst,
                plane_mst: 2.0 * 3f64.sqrt() * radius,
                sr_bound: report.sr,
                below_plane_ratio: report.sr < PLANE_RATIO,
            })
        })
        .collect()
}

fn floor_spaces() -> Result<Vec<Space>> {
    Ok(vec![
        Space::cone_sheets(2)?,
        Space::cone_sheets(3)?,
        Space::cone_sheets(6)?,
        Space::regular_tetrahedron(1.0)?,
        Space::disphenoid(1.0, 1.2, 1.3)?,
    ])
}

pub fn repro(options: &ReproOptions) -> Result<ReproReport> {
    let polygon_rows = polygon_rows(3..=8)?;
    let limit_rows = polygon_rows_limit()?;
    let wide_angle_rows = wide_angle_rows([2.25 * PI, 2.5 * PI, 3.0 * PI])?;
    let h = 3f64.sqrt() / 2.0;
    let plane_equilateral = steiner_ratio(
        &Space::Plane,
        &[SurfacePoint::xy(0.0, 0.0), SurfacePoint::xy(1.0, 0.0), SurfacePoint::xy(0.5, h)],
    )?;

    let mut search_floors = Vec::new();
    if options.restarts > 0 {
        for space in floor_spaces()? {
            let best = search_inf(&space, 3, options.restarts, options.seed)?;
            let floor = PLANE_RATIO - FLOOR_SLACK;
            search_floors.push(SearchFloorRow {
                space,
                terminals: 3,
                restarts: options.restarts,
                seed: options.seed,
                best_sr: best.sr,
                floor,
                above_floor: best.sr >= floor,
                attains_plane_ratio: (best.sr - PLANE_RATIO).abs() <= FLOOR_SLACK,
            });
        }
    }

    let passed = polygon_rows.iter().chain(&limit_rows).all(|r| {
        (r.sr_bound - r.closed_form).abs() < 1e-9 && (r.mst - 2.0 * f64::from(r.k - 1) * r.radius).abs() < 1e-9
    }) && wide_angle_rows.iter().all(|r| r.below_plane_ratio && r.mst > r.plane_mst)
        && plane_equilateral.kind == SmtKind::Exact
        && (plane_equilateral.sr - PLANE_RATIO).abs() < 1e-9
        && search_floors.iter().all(|r| r.above_floor);
    Ok(ReproReport { polygon_rows, limit_rows, wide_angle_rows, plane_equilateral, search_floors, passed })
}

fn polygon_rows_limit() -> Result<Vec<PolygonRow>> {
    polygon_rows([16, 64, 256])
}
