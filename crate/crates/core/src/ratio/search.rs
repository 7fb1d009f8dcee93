//! Randomized restarts of simplex descent over configurations, looking for small ratios.

use std::f64::consts::TAU;

use rand::Rng;
use rayon::prelude::*;

use super::simplex;
use super::{smt_value, steiner_ratio_with, RatioReport, SearchMeta, TraceEntry};
use crate::covering::sample_rng;
use crate::error::{Error, Result};
use crate::quotient::MAX_QUOTIENT_TERMINALS;
use crate::space::{Disphenoid, Space, SurfacePoint, Vec2};
use crate::spanning;
use crate::steiner::{DEFAULT_TOL, MAX_TOPOLOGY_TERMINALS};

pub const DEFAULT_ITERATIONS: usize = 500;
pub const DEFAULT_SHRINK_TOL: f64 = 1e-10;
const INITIAL_STEP: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub restarts: usize,
    pub seed: u64,
    pub iterations: usize,
    pub shrink_tol: f64,
    pub tol: f64,
    /// Configurations descended from before the random restarts.
    pub seeded: Vec<Vec<SurfacePoint>>,
}

impl SearchOptions {
    pub fn new(restarts: usize, seed: u64) -> Self {
        SearchOptions {
            restarts,
            seed,
            iterations: DEFAULT_ITERATIONS,
            shrink_tol: DEFAULT_SHRINK_TOL,
            tol: DEFAULT_TOL,
            seeded: Vec::new(),
        }
    }
}

/// Coordinates for the search with the gauge symmetries removed.
///
/// Plane: the first two points sit at `(0,0)` and `(1,0)`. Cone: the first point sits at
/// `r = 1, φ = 0`, the others are plane points mapped onto the cone by scaling the polar
/// angle. Disphenoid: every point is a plane point folded onto the surface.
#[derive(Debug, Clone, Copy)]
enum Chart {
    Plane,
    Cone { theta: f64 },
    Disphenoid(Disphenoid),
}

impl Chart {
    fn new(space: &Space) -> Self {
        match space {
            Space::Plane => Chart::Plane,
            Space::Cone(c) => Chart::Cone { theta: c.total_angle() },
            Space::Disphenoid(d) => Chart::Disphenoid(*d),
        }
    }

    fn dim(&self, n: usize) -> usize {
        match self {
            Chart::Plane => 2 * (n - 2),
            Chart::Cone { .. } => 2 * (n - 1),
            Chart::Disphenoid(_) => 2 * n,
        }
    }

    fn step(&self) -> f64 {
        match self {
            Chart::Disphenoid(d) => INITIAL_STEP * d.sides().iter().copied().fold(f64::INFINITY, f64::min),
            _ => INITIAL_STEP,
        }
    }

    fn decode(&self, x: &[f64]) -> Vec<SurfacePoint> {
        let pairs = x.chunks_exact(2).map(|c| Vec2::new(c[0], c[1]));
        match *self {
            Chart::Plane => [SurfacePoint::xy(0.0, 0.0), SurfacePoint::xy(1.0, 0.0)]
                .into_iter()
                .chain(pairs.map(SurfacePoint::from_vec))
                .collect(),
            Chart::Cone { theta } => std::iter::once(SurfacePoint::polar(1.0, 0.0))
                .chain(pairs.map(|p| SurfacePoint::polar(p.norm(), p.y.atan2(p.x).rem_euclid(TAU) * theta / TAU)))
                .collect(),
            Chart::Disphenoid(d) => pairs.map(|p| d.fold(p)).collect(),
        }
    }

    /// Chart coordinates of a configuration, moved into the gauge first.
    fn encode(&self, points: &[SurfacePoint]) -> Option<Vec<f64>> {
        match *self {
            Chart::Plane => {
                let pts: Vec<Vec2> = points.iter().map(SurfacePoint::as_plane).collect::<Option<_>>()?;
                let (o, e) = (pts[0], pts[1] - pts[0]);
                let scale = e.norm_squared();
                if scale == 0.0 {
                    return None;
                }
                // similarity sending pts[0] to 0 and pts[1] to (1, 0)
                Some(
                    pts[2..]
                        .iter()
                        .flat_map(|p| {
                            let d = p - o;
                            [(d.x * e.x + d.y * e.y) / scale, (d.y * e.x - d.x * e.y) / scale]
                        })
                        .collect(),
                )
            }
            Chart::Cone { theta } => {
                let polar: Vec<(f64, f64)> = points
                    .iter()
                    .map(|p| match p {
                        SurfacePoint::Cone { r, phi } => Some((*r, *phi)),
                        _ => None,
                    })
                    .collect::<Option<_>>()?;
                // the apex cannot be pinned, so lead with a point off it
                let lead = polar.iter().position(|&(r, _)| r > 0.0)?;
                let (r0, phi0) = polar[lead];
                let rest = polar.iter().enumerate().filter(|&(i, _)| i != lead).map(|(_, p)| p);
                Some(
                    rest.flat_map(|&(r, phi)| {
                        let psi = (phi - phi0).rem_euclid(theta) * TAU / theta;
                        [r / r0 * psi.cos(), r / r0 * psi.sin()]
                    })
                    .collect(),
                )
            }
            Chart::Disphenoid(d) => Some(
                points
                    .iter()
                    .flat_map(|p| {
                        let q = match *p {
                            SurfacePoint::Disphenoid { face, bary } => d.to_plane(face, bary),
                            _ => Vec2::new(f64::NAN, f64::NAN),
                        };
                        [q.x, q.y]
                    })
                    .collect(),
            ),
        }
    }

    fn random(&self, n: usize, seed: u64, stream: u64) -> Vec<f64> {
        let mut rng = sample_rng(seed, stream);
        match self {
            Chart::Plane => (0..self.dim(n)).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            Chart::Cone { .. } => (0..self.dim(n)).map(|_| rng.gen_range(-2.0..2.0)).collect(),
            Chart::Disphenoid(d) => (0..n)
                .flat_map(|_| {
                    let p = d.lattice_point(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
                    [p.x, p.y]
                })
                .collect(),
        }
    }
}

/// Scales a plane or cone configuration to diameter 1; the disphenoid has a fixed size.
fn normalize(space: &Space, points: Vec<SurfacePoint>) -> Vec<SurfacePoint> {
    let diameter = space.diameter_of(&points);
    if !(diameter > 0.0) || matches!(space, Space::Disphenoid(_)) {
        return points;
    }
    points
        .into_iter()
        .map(|p| match p {
            SurfacePoint::Plane { x, y } => SurfacePoint::xy(x / diameter, y / diameter),
            SurfacePoint::Cone { r, phi } => SurfacePoint::polar(r / diameter, phi),
            other => other,
        })
        .collect()
}

fn objective(space: &Space, points: &[SurfacePoint], tol: f64) -> f64 {
    let Ok(points) = space.distinct_points(points, 2) else {
        return f64::INFINITY;
    };
    let mst = spanning::mst_length(space, &points);
    match smt_value(space, &points, mst, tol) {
        Ok((smt, _)) => smt / mst,
        Err(_) => f64::INFINITY,
    }
}

struct Descent {
    report: Option<RatioReport>,
    iterations: usize,
    evaluations: usize,
}

fn descend(space: &Space, chart: &Chart, x0: &[f64], options: &SearchOptions) -> Descent {
    let min = simplex::minimize(
        |x| objective(space, &chart.decode(x), options.tol),
        x0,
        chart.step(),
        options.iterations,
        options.shrink_tol,
    );
    let points = normalize(space, chart.decode(&min.x));
    let report = if min.value.is_finite() { steiner_ratio_with(space, &points, options.tol).ok() } else { None };
    Descent {
        report,
        iterations: min.iterations,
        evaluations: min.evaluations,
    }
}

/// Smallest ratio over `restarts` random starts on `n` terminals; deterministic in `seed`.
pub fn search_inf(space: &Space, n: usize, restarts: usize, seed: u64) -> Result<RatioReport> {
    search_inf_with(space, n, &SearchOptions::new(restarts, seed))
}

/// Seeded configurations run first, then random restart `i` draws from stream `i` of
/// `seed`. Ties go to the earliest run, so doubling the restarts never raises the result.
pub fn search_inf_with(space: &Space, n: usize, options: &SearchOptions) -> Result<RatioReport> {
    let max = match space {
        Space::Plane => MAX_TOPOLOGY_TERMINALS,
        Space::Cone(c) if c.sheets().is_none() => MAX_TOPOLOGY_TERMINALS,
        _ => MAX_QUOTIENT_TERMINALS,
    };
    if !(3..=max).contains(&n) {
        return Err(Error::TerminalCount { got: n, min: 3, max });
    }
    if options.restarts + options.seeded.len() == 0 {
        return Err(Error::InvalidArgument("search needs at least one restart".into()));
    }
    let chart = Chart::new(space);
    let mut starts = Vec::with_capacity(options.seeded.len() + options.restarts);
    for (i, config) in options.seeded.iter().enumerate() {
        if config.len() != n {
            return Err(Error::InvalidArgument(format!(
                "seeded configuration {i} has {} points, expected {n}",
                config.len()
            )));
        }
        let canonical = space.canonical_all(config)?;
        let x = chart
            .encode(&canonical)
            .ok_or_else(|| Error::InvalidArgument(format!("seeded configuration {i} cannot be placed in the gauge")))?;
        starts.push(x);
    }
    starts.extend((0..options.restarts as u64).map(|r| chart.random(n, options.seed, r)));

    let runs: Vec<Descent> = starts.par_iter().map(|x0| descend(space, &chart, x0, options)).collect();

    let mut best: Option<(usize, RatioReport)> = None;
    let mut trace = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        let Some(report) = &run.report else { continue };
        if best.as_ref().is_none_or(|(_, b)| report.sr < b.sr) {
            trace.push(TraceEntry { restart: i, sr: report.sr });
            best = Some((i, report.clone()));
        }
    }
    let (best_restart, mut report) = match best {
        Some(b) => b,
        None => {
            return Err(Error::InvalidArgument("every restart collapsed onto coincident points".into()));
        }
    };
    report.search = Some(SearchMeta {
        seed: options.seed,
        restarts: options.restarts,
        seeded_restarts: options.seeded.len(),
        iterations_per_restart: options.iterations,
        total_iterations: runs.iter().map(|r| r.iterations).sum(),
        evaluations: runs.iter().map(|r| r.evaluations).sum(),
        best_restart,
        trace,
    });
    Ok(report)
}
