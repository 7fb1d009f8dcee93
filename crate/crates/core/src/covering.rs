//! Locally isometric branched coverings of the cones `2π/k` and of the disphenoid
//! surface by the plane.
//!
//! The cone of angle `2π/k` is the quotient of the plane by the rotations through
//! multiples of `2π/k`; the covering is branched over the apex.
//!
//! The disphenoid is the quotient of the plane by the group of maps `z -> ±z + v`
//! with `v` in the lattice spanned by `2B` and `2C` (face vertex `A` at the origin).
//! The orientation-reversing-free half-turns `z -> -z + v` are the rotations by
//! `π` about the vertices of the face tiling, which are the lifts of the four
//! tetrahedron vertices, each a cone point of total angle `π`.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{Disphenoid, Space, SurfacePoint, Vec2, COINCIDENCE_EPS};
use crate::spanning;

/// Tolerances of the three covering properties checked by [`verify_covering`].
pub const NONEXPANSIVE_TOLERANCE: f64 = 1e-12;
pub const LENGTH_TOLERANCE: f64 = 1e-12;
pub const MST_TOLERANCE: f64 = 1e-9;

const SAMPLE_RADIUS_MIN: f64 = 0.1;
const SAMPLE_RADIUS_MAX: f64 = 10.0;
const POINTS_PER_SAMPLE: usize = 5;
const MAX_SUBDIVISION_DEPTH: u32 = 48;

/// A deck transformation: a plane isometry that permutes the sheets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeckElement {
    /// Rotation by `2π * index / sheets` about the origin.
    Rotation { index: u32, sheets: u32 },
    /// `z -> sign * z + translation`, with `translation = 2(i B + j C)`.
    Lattice { sign: i8, i: i32, j: i32, translation: [f64; 2] },
}

impl DeckElement {
    pub fn apply(&self, p: Vec2) -> Vec2 {
        match *self {
            DeckElement::Rotation { index: 0, .. } => p,
            DeckElement::Rotation { index, sheets } => {
                let angle = TAU * f64::from(index) / f64::from(sheets);
                let (s, c) = angle.sin_cos();
                Vec2::new(c * p.x - s * p.y, s * p.x + c * p.y)
            }
            DeckElement::Lattice { sign, translation, .. } => {
                p * f64::from(sign) + Vec2::new(translation[0], translation[1])
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        match *self {
            DeckElement::Rotation { index, .. } => index == 0,
            DeckElement::Lattice { sign, i, j, .. } => sign == 1 && i == 0 && j == 0,
        }
    }
}

/// The plane as a branched covering of a cone `2π/k` or of a disphenoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoveringMap {
    Cone { sheets: u32 },
    Disphenoid(Disphenoid),
}

impl CoveringMap {
    pub fn cone(sheets: u32) -> Result<Self> {
        if sheets == 0 {
            return Err(Error::InvalidSpace("cone covering needs k >= 1 sheets".into()));
        }
        Ok(CoveringMap::Cone { sheets })
    }

    pub fn disphenoid(d: Disphenoid) -> Self {
        CoveringMap::Disphenoid(d)
    }

    /// The covering whose base is `space`, if the plane covers it.
    pub fn for_space(space: &Space) -> Result<Self> {
        match space {
            Space::Cone(cone) => match cone.sheets() {
                Some(k) => Self::cone(k),
                None => Err(Error::UnsupportedCone(format!(
                    "total angle {} is not given as 2pi/k; only star upper bounds are available",
                    cone.total_angle()
                ))),
            },
            Space::Disphenoid(d) => Ok(CoveringMap::Disphenoid(*d)),
            Space::Plane => Self::cone(1),
        }
    }

    pub fn base(&self) -> Space {
        match *self {
            CoveringMap::Cone { sheets } => Space::cone_sheets(sheets).expect("sheets >= 1"),
            CoveringMap::Disphenoid(d) => Space::Disphenoid(d),
        }
    }

    pub fn identity(&self) -> DeckElement {
        match *self {
            CoveringMap::Cone { sheets } => DeckElement::Rotation { index: 0, sheets },
            CoveringMap::Disphenoid(_) => DeckElement::Lattice { sign: 1, i: 0, j: 0, translation: [0.0, 0.0] },
        }
    }

    /// Singular values `B`: the apex, or the four tetrahedron vertices. The identity
    /// covering has none.
    pub fn singular_values(&self) -> Vec<SurfacePoint> {
        match self {
            CoveringMap::Cone { sheets: 1 } => Vec::new(),
            CoveringMap::Cone { .. } => vec![SurfacePoint::polar(0.0, 0.0)],
            CoveringMap::Disphenoid(d) => (0..4).map(|i| d.vertex_point(i)).collect(),
        }
    }

    /// Singular points `A` within `radius` of the origin.
    pub fn singular_points(&self, radius: f64) -> Vec<Vec2> {
        match self {
            CoveringMap::Cone { sheets: 1 } => Vec::new(),
            CoveringMap::Cone { .. } => vec![Vec2::zeros()],
            CoveringMap::Disphenoid(d) => {
                let mut out = Vec::new();
                let (ri, rj) = lattice_ranges(d, Vec2::zeros(), radius, 1.0);
                for i in ri.clone() {
                    for j in rj.clone() {
                        let p = d.lattice_point(f64::from(i), f64::from(j));
                        if p.norm() <= radius {
                            out.push(p);
                        }
                    }
                }
                out
            }
        }
    }

    /// Covering projection `f`.
    pub fn project(&self, p: Vec2) -> SurfacePoint {
        match self {
            CoveringMap::Cone { sheets } => {
                let r = p.norm();
                if r == 0.0 {
                    return SurfacePoint::polar(0.0, 0.0);
                }
                let theta = TAU / f64::from(*sheets);
                SurfacePoint::polar(r, crate::space::normalize_angle(p.y.atan2(p.x), theta))
            }
            CoveringMap::Disphenoid(d) => d.fold(p),
        }
    }

    /// The lift of a canonical base point on the identity sheet.
    pub fn representative(&self, x: &SurfacePoint) -> Vec2 {
        match (self, *x) {
            (CoveringMap::Cone { .. }, SurfacePoint::Cone { r, phi }) => Vec2::new(r * phi.cos(), r * phi.sin()),
            (CoveringMap::Disphenoid(d), SurfacePoint::Disphenoid { face, bary }) => d.to_plane(face, bary),
            _ => panic!("point {x:?} does not belong to the base of {self:?}"),
        }
    }

    /// Deck elements `g` whose image of `p` lies within `radius` of the origin.
    fn deck_reaching(&self, p: Vec2, radius: f64) -> Vec<DeckElement> {
        match *self {
            CoveringMap::Cone { sheets } => (0..sheets).map(|index| DeckElement::Rotation { index, sheets }).collect(),
            CoveringMap::Disphenoid(d) => {
                let mut out = vec![self.identity()];
                for sign in [1i8, -1] {
                    let center = -p * f64::from(sign);
                    for (i, j, v) in lattice_translations(&d, center, radius) {
                        if sign == 1 && i == 0 && j == 0 {
                            continue;
                        }
                        out.push(DeckElement::Lattice { sign, i, j, translation: [v.x, v.y] });
                    }
                }
                out
            }
        }
    }

    /// All lifts of the canonical base point `x` within `radius` of the origin, with the
    /// deck element producing each. The identity sheet comes first when it qualifies.
    pub fn lifts_with_deck(&self, x: &SurfacePoint, radius: f64) -> Vec<(DeckElement, Vec2)> {
        let rep = self.representative(x);
        let mut out: Vec<(DeckElement, Vec2)> = Vec::new();
        if let (CoveringMap::Cone { .. }, SurfacePoint::Cone { r, .. }) = (self, x) {
            if *r == 0.0 {
                return if radius >= 0.0 { vec![(self.identity(), Vec2::zeros())] } else { Vec::new() };
            }
        }
        for g in self.deck_reaching(rep, radius) {
            let p = g.apply(rep);
            if p.norm() > radius {
                continue;
            }
            let scale = 1.0 + p.norm();
            if out.iter().any(|(_, q)| (p - q).norm() <= COINCIDENCE_EPS * scale) {
                continue;
            }
            out.push((g, p));
        }
        out
    }

    /// All pre-images of `x` within `radius` of the origin.
    pub fn lifts(&self, x: &SurfacePoint, radius: f64) -> Vec<Vec2> {
        self.lifts_with_deck(x, radius).into_iter().map(|(_, p)| p).collect()
    }

    /// Base distance between the projections of two plane points.
    pub fn projected_distance(&self, p: Vec2, q: Vec2) -> f64 {
        self.base().metric(&self.project(p), &self.project(q))
    }

    /// Whether the segment `[p, q]` projects isometrically: no other lift of `q` is
    /// closer to `p` than `q` itself.
    fn is_normal_segment(&self, p: Vec2, q: Vec2) -> bool {
        match self {
            CoveringMap::Cone { sheets } => {
                if *sheets == 1 || p.norm() == 0.0 || q.norm() == 0.0 {
                    return true;
                }
                let angle = (p.x * q.y - p.y * q.x).abs().atan2(p.dot(&q));
                angle <= 0.5 * PI / f64::from(*sheets)
            }
            CoveringMap::Disphenoid(d) => {
                let len = (p - q).norm();
                let shortest_side = d.sides().iter().copied().fold(f64::INFINITY, f64::min);
                if len > shortest_side {
                    return false;
                }
                let mid = (p + q) * 0.5;
                nearest_tiling_vertex_distance(d, mid) >= len
            }
        }
    }

    /// Length of the projection of the segment `[p, q]`, measured piecewise with the
    /// base metric on pieces short enough to project isometrically.
    pub fn projected_length(&self, p: Vec2, q: Vec2) -> f64 {
        let base = self.base();
        let mut total = 0.0;
        let mut stack = vec![(p, q, 0u32)];
        while let Some((a, b, depth)) = stack.pop() {
            if depth >= MAX_SUBDIVISION_DEPTH || self.is_normal_segment(a, b) {
                total += base.metric(&self.project(a), &self.project(b));
            } else {
                let m = (a + b) * 0.5;
                stack.push((m, b, depth + 1));
                stack.push((a, m, depth + 1));
            }
        }
        total
    }
}

/// Integer ranges `(i, j)` covering all `scale * (i B + j C)` within `radius` of `center`.
fn lattice_ranges(
    d: &Disphenoid,
    center: Vec2,
    radius: f64,
    scale: f64,
) -> (std::ops::RangeInclusive<i32>, std::ops::RangeInclusive<i32>) {
    let (b, c) = (d.vertex_b() * scale, d.vertex_c() * scale);
    let det = (b.x * c.y - b.y * c.x).abs();
    let (s, t) = d.lattice_coords(center);
    let (s, t) = (s / scale, t / scale);
    let di = radius * c.norm() / det;
    let dj = radius * b.norm() / det;
    (
        (s - di).floor() as i32..=(s + di).ceil() as i32,
        (t - dj).floor() as i32..=(t + dj).ceil() as i32,
    )
}

/// Deck translations `2(i B + j C)` within `radius` of `center`.
fn lattice_translations(d: &Disphenoid, center: Vec2, radius: f64) -> Vec<(i32, i32, Vec2)> {
    let (ri, rj) = lattice_ranges(d, center, radius, 2.0);
    let mut out = Vec::new();
    for i in ri {
        for j in rj.clone() {
            let v = d.lattice_point(f64::from(2 * i), f64::from(2 * j));
            if (v - center).norm() <= radius {
                out.push((i, j, v));
            }
        }
    }
    out
}

fn nearest_tiling_vertex_distance(d: &Disphenoid, p: Vec2) -> f64 {
    let (s, t) = d.lattice_coords(p);
    let (s0, t0) = (s.floor() as i32, t.floor() as i32);
    let mut best = f64::INFINITY;
    for i in s0 - 1..=s0 + 2 {
        for j in t0 - 1..=t0 + 2 {
            best = best.min((p - d.lattice_point(f64::from(i), f64::from(j))).norm());
        }
    }
    best
}

/// Intrinsic distance on the disphenoid between two canonical chart points.
pub fn disphenoid_distance(d: &Disphenoid, x: &SurfacePoint, y: &SurfacePoint) -> f64 {
    disphenoid_distance_within(d, x, y, d.diameter_bound())
}

/// `min |x' - g(y')|` over deck elements `g` whose translation lies within `reach` of
/// the translation that would map `y'` onto `x'`, where `x'`, `y'` are the net
/// representatives. Any `reach` at least the intrinsic diameter attains the minimum.
pub fn disphenoid_distance_within(d: &Disphenoid, x: &SurfacePoint, y: &SurfacePoint, reach: f64) -> f64 {
    let to_plane = |p: &SurfacePoint| match *p {
        SurfacePoint::Disphenoid { face, bary } => d.to_plane(face, bary),
        _ => panic!("disphenoid distance needs disphenoid chart points, got {p:?}"),
    };
    let (mut px, mut py) = (to_plane(x), to_plane(y));
    if (py.x, py.y) < (px.x, px.y) {
        std::mem::swap(&mut px, &mut py);
    }
    let mut best = (px - py).norm();
    for sign in [1.0, -1.0] {
        let target = px - py * sign;
        for (_, _, v) in lattice_translations(d, target, reach) {
            best = best.min((target - v).norm());
        }
    }
    best
}

/// Outcome of one property in [`CoveringReport`].
#[derive(Debug, Clone, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub tolerance: f64,
    pub checks: usize,
    pub violations: usize,
    pub max_violation: f64,
    /// Plane points of the first violating sample.
    pub witness: Option<Vec<[f64; 2]>>,
}

impl PropertyCheck {
    fn new(name: &str, tolerance: f64) -> Self {
        PropertyCheck {
            name: name.to_string(),
            tolerance,
            checks: 0,
            violations: 0,
            max_violation: 0.0,
            witness: None,
        }
    }

    fn record(&mut self, excess: f64, sample: &[Vec2]) {
        self.checks += 1;
        self.max_violation = self.max_violation.max(excess);
        if excess > self.tolerance {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(sample.iter().map(|p| [p.x, p.y]).collect());
            }
        }
    }

    fn merge(&mut self, other: PropertyCheck) {
        self.checks += other.checks;
        self.violations += other.violations;
        self.max_violation = self.max_violation.max(other.max_violation);
        if self.witness.is_none() {
            self.witness = other.witness;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringReport {
    pub base: String,
    pub samples: usize,
    pub seed: u64,
    pub nonexpansive: PropertyCheck,
    pub length_preservation: PropertyCheck,
    pub mst_monotone: PropertyCheck,
    pub passed: bool,
}

/// Random generator for sample `index` of a run seeded with `seed`.
pub(crate) fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform polar sample from the annulus `0.1 <= r <= 10`.
pub(crate) fn annulus_point(rng: &mut ChaCha8Rng) -> Vec2 {
    let r = rng.gen_range(SAMPLE_RADIUS_MIN..=SAMPLE_RADIUS_MAX);
    let angle = rng.gen_range(0.0..TAU);
    Vec2::new(r * angle.cos(), r * angle.sin())
}

/// Checks on random plane point sets that the projection does not increase distances,
/// preserves the length of polylines, and does not increase minimal spanning tree length.
pub fn verify_covering(cover: &CoveringMap, samples: usize, seed: u64) -> Result<CoveringReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let base = cover.base();
    let checks: Vec<[PropertyCheck; 3]> = (0..samples)
        .into_par_iter()
        .map(|index| {
            let mut rng = sample_rng(seed, index as u64);
            let pts: Vec<Vec2> = (0..POINTS_PER_SAMPLE).map(|_| annulus_point(&mut rng)).collect();
            let mut out = [
                PropertyCheck::new("nonexpansive", NONEXPANSIVE_TOLERANCE),
                PropertyCheck::new("length_preservation", LENGTH_TOLERANCE),
                PropertyCheck::new("mst_monotone", MST_TOLERANCE),
            ];

            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    let excess = cover.projected_distance(pts[i], pts[j]) - (pts[i] - pts[j]).norm();
                    out[0].record(excess.max(0.0), &pts);
                }
            }

            let plane_length: f64 = pts.windows(2).map(|w| (w[0] - w[1]).norm()).sum();
            let projected_length: f64 = pts.windows(2).map(|w| cover.projected_length(w[0], w[1])).sum();
            out[1].record((projected_length - plane_length).abs(), &pts);

            let mut projected: Vec<SurfacePoint> = Vec::new();
            for p in &pts {
                let x = cover.project(*p);
                if projected.iter().all(|q| base.metric(q, &x) > COINCIDENCE_EPS) {
                    projected.push(x);
                }
            }
            let plane: Vec<SurfacePoint> = pts.iter().map(|p| SurfacePoint::from_vec(*p)).collect();
            let plane_mst = spanning::mst_canonical(&Space::Plane, &plane).total_length;
            let base_mst = if projected.len() >= 2 {
                spanning::mst_canonical(&base, &projected).total_length
            } else {
                0.0
            };
            out[2].record((base_mst - plane_mst).max(0.0), &pts);
            out
        })
        .collect();

    let mut totals = [
        PropertyCheck::new("nonexpansive", NONEXPANSIVE_TOLERANCE),
        PropertyCheck::new("length_preservation", LENGTH_TOLERANCE),
        PropertyCheck::new("mst_monotone", MST_TOLERANCE),
    ];
    for sample in checks {
        for (total, check) in totals.iter_mut().zip(sample) {
            total.merge(check);
        }
    }
    let [nonexpansive, length_preservation, mst_monotone] = totals;
    let passed = nonexpansive.passed() && length_preservation.passed() && mst_monotone.passed();
    Ok(CoveringReport {
        base: base.to_string(),
        samples,
        seed,
        nonexpansive,
        length_preservation,
        mst_monotone,
        passed,
    })
}
