//! Sample-level check that lifting a configuration never raises its Steiner ratio.

use rayon::prelude::*;
use serde::Serialize;

use crate::covering::{annulus_point, sample_rng, CoveringMap};
use crate::error::{Error, Result};
use crate::quotient::{smt_quotient, MAX_QUOTIENT_TERMINALS};
use crate::space::{Space, SurfacePoint};
use crate::spanning;
use crate::steiner::DEFAULT_TOL;

pub const THEOREM_TOLERANCE: f64 = 1e-6;
const MAX_DRAWS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremWitness {
    pub sample: usize,
    pub base_points: Vec<SurfacePoint>,
    pub lifted_points: Vec<[f64; 2]>,
    pub sr_base: f64,
    pub sr_lift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub base: Space,
    pub samples: usize,
    pub seed: u64,
    pub terminals: usize,
    pub tolerance: f64,
    pub violations: usize,
    /// Smallest `sr_base - sr_lift` over all samples.
    pub worst_margin: f64,
    /// Largest `|sr_base - sr_lift|` over all samples.
    pub max_gap: f64,
    pub witness: Option<TheoremWitness>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// For random three-point base configurations, compares the base ratio with the plane ratio
/// of the lift realizing the base Steiner tree.
pub fn verify_theorem(cover: &CoveringMap, samples: usize, seed: u64) -> Result<TheoremReport> {
    verify_theorem_with(cover, samples, seed, 3, DEFAULT_TOL)
}

pub fn verify_theorem_with(
    cover: &CoveringMap,
    samples: usize,
    seed: u64,
    terminals: usize,
    tol: f64,
) -> Result<TheoremReport> {
    if !(2..=MAX_QUOTIENT_TERMINALS).contains(&terminals) {
        return Err(Error::TerminalCount { got: terminals, min: 2, max: MAX_QUOTIENT_TERMINALS });
    }
    let base = cover.base();
    let outcomes: Vec<Result<TheoremWitness>> = (0..samples)
        .into_par_iter()
        .map(|sample| check_sample(cover, &base, sample, seed, terminals, tol))
        .collect();

    let mut violations = 0;
    let mut worst_margin = f64::INFINITY;
    let mut max_gap: f64 = 0.0;
    let mut witness = None;
    for outcome in outcomes {
        let w = outcome?;
        let margin = w.sr_base - w.sr_lift;
        max_gap = max_gap.max(margin.abs());
        if margin < -THEOREM_TOLERANCE {
            violations += 1;
        }
        if margin < worst_margin {
            worst_margin = margin;
            witness = Some(w);
        }
    }
    if violations == 0 {
        witness = None;
    }
    Ok(TheoremReport {
        base,
        samples,
        seed,
        terminals,
        tolerance: THEOREM_TOLERANCE,
        violations,
        worst_margin: if samples == 0 { 0.0 } else { worst_margin },
        max_gap,
        witness,
    })
}

fn check_sample(
    cover: &CoveringMap,
    base: &Space,
    sample: usize,
    seed: u64,
    terminals: usize,
    tol: f64,
) -> Result<TheoremWitness> {
    let mut rng = sample_rng(seed, sample as u64);
    // configurations whose projections coincide are redrawn
    let points = (0..MAX_DRAWS)
        .map(|_| (0..terminals).map(|_| cover.project(annulus_point(&mut rng))).collect::<Vec<_>>())
        .find_map(|pts| base.distinct_points(&pts, 2).ok())
        .ok_or_else(|| Error::InvalidArgument(format!("sample {sample} never drew distinct points")))?;

    let smt = smt_quotient(base, &points, tol)?;
    let mst_base = spanning::mst_length(base, &points);
    let lifted = smt.lifted_points();
    let lifted_sites: Vec<SurfacePoint> = lifted.iter().map(|p| SurfacePoint::from_vec(*p)).collect();
    let mst_lift = spanning::mst_length(&Space::Plane, &lifted_sites);
    Ok(TheoremWitness {
        sample,
        base_points: points,
        lifted_points: smt.lifted_terminals.clone(),
        sr_base: smt.length() / mst_base,
        sr_lift: smt.plane_tree.total_length / mst_lift,
    })
}
