//! Flat surfaces: the Euclidean plane, flat cones and the disphenoid surface.
//!
//! Each surface has one chart:
//!
//! * plane: Cartesian `(x, y)`;
//! * cone: polar `(r, phi)` with `phi` in `[0, theta)`, the apex is `r = 0`;
//! * disphenoid: a face index in `0..4` plus barycentric coordinates.
//!
//! The disphenoid with acute face triangle `ABC` (side `a` opposite `A` and
//! so on) is laid out in the plane as its net: the triangle `0, 2B, 2C` cut
//! into four copies of `ABC` by its midlines, with `A` at the origin and `B`
//! on the positive x-axis. Net points are often handled in lattice
//! coordinates `(s, t)`, meaning the plane point `s * B + t * C`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::Vector2;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::covering;
use crate::error::{Error, Result};

pub type Vec2 = Vector2<f64>;

/// Angles within this distance of the cone angle snap to zero.
pub const ANGLE_SNAP: f64 = 1e-12;

/// Points closer than this are treated as the same point.
pub const COINCIDENCE_EPS: f64 = 1e-12;

const BARY_SUM_TOLERANCE: f64 = 1e-9;
const NET_EDGE_EPS: f64 = 1e-12;

/// Total angle at the apex of a cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConeAngle {
    Radians(f64),
    /// `2π/k`, the cones covered by the plane through the order-`k` rotation group.
    FullTurnOver(u32),
}

impl ConeAngle {
    pub fn radians(self) -> f64 {
        match self {
            ConeAngle::Radians(theta) => theta,
            ConeAngle::FullTurnOver(k) => TAU / f64::from(k),
        }
    }

    pub fn sheets(self) -> Option<u32> {
        match self {
            ConeAngle::Radians(_) => None,
            ConeAngle::FullTurnOver(k) => Some(k),
        }
    }
}

impl fmt::Display for ConeAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeAngle::Radians(theta) => write!(f, "{theta}"),
            ConeAngle::FullTurnOver(k) => write!(f, "2pi/{k}"),
        }
    }
}

impl FromStr for ConeAngle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(k) = s.strip_prefix("2pi/").or_else(|| s.strip_prefix("2π/")) {
            let k: u32 = k.trim().parse().map_err(|_| {
                Error::InvalidSpace(format!("cone angle token `{s}` needs a positive integer k"))
            })?;
            return Ok(ConeAngle::FullTurnOver(k));
        }
        s.parse::<f64>()
            .map(ConeAngle::Radians)
            .map_err(|_| Error::InvalidSpace(format!("cannot parse cone angle `{s}`")))
    }
}

impl Serialize for ConeAngle {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ConeAngle::Radians(theta) => serializer.serialize_f64(*theta),
            ConeAngle::FullTurnOver(_) => serializer.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for ConeAngle {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Token(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Number(theta) => Ok(ConeAngle::Radians(theta)),
            Repr::Token(token) => token.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone {
    angle: ConeAngle,
}

impl Cone {
    pub fn new(angle: ConeAngle) -> Result<Self> {
        match angle {
            ConeAngle::Radians(theta) if !(theta.is_finite() && theta > 0.0) => Err(Error::InvalidSpace(
                format!("cone total angle must be positive and finite, got {theta}"),
            )),
            ConeAngle::FullTurnOver(0) => {
                Err(Error::InvalidSpace("cone angle 2pi/k needs k >= 1".into()))
            }
            _ => Ok(Cone { angle }),
        }
    }

    pub fn angle(&self) -> ConeAngle {
        self.angle
    }

    pub fn total_angle(&self) -> f64 {
        self.angle.radians()
    }

    /// Number of plane sheets over the cone, when the angle is `2π/k`.
    pub fn sheets(&self) -> Option<u32> {
        self.angle.sheets()
    }
}

/// Reduces `phi` into `[0, theta)`, snapping values just below `theta` to zero.
pub fn normalize_angle(phi: f64, theta: f64) -> f64 {
    let reduced = phi.rem_euclid(theta);
    if reduced >= theta || theta - reduced < ANGLE_SNAP {
        0.0
    } else {
        reduced
    }
}

/// Intrinsic distance on the flat cone of total angle `theta`.
pub fn cone_distance(theta: f64, r1: f64, phi1: f64, r2: f64, phi2: f64) -> f64 {
    let raw = (phi1 - phi2).abs();
    let dphi = raw.min(theta - raw);
    if dphi < PI {
        // (r1 - r2)^2 + 4 r1 r2 sin^2(dphi/2) avoids the cancellation of the cosine form.
        let half = (0.5 * dphi).sin();
        ((r1 - r2) * (r1 - r2) + 4.0 * r1 * r2 * half * half).sqrt()
    } else {
        r1 + r2
    }
}

/// Surface of an isosceles tetrahedron with congruent acute faces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disphenoid {
    sides: [f64; 3],
    b: Vec2,
    c: Vec2,
}

impl Disphenoid {
    /// Face corners in lattice coordinates, in vertex-role order `(A, B, C)`.
    pub const FACE_CORNERS: [[(i32, i32); 3]; 4] = [
        [(0, 0), (1, 0), (0, 1)],
        [(1, 0), (2, 0), (1, 1)],
        [(0, 1), (1, 1), (0, 2)],
        [(1, 1), (0, 1), (1, 0)],
    ];

    /// Tetrahedron vertex at each face corner, matching `FACE_CORNERS`.
    ///
    /// Vertex `i` sits at `VERTEX_LATTICE[i]` in the net; the three outer corners of
    /// the net are all vertex 0.
    pub const FACE_VERTICES: [[usize; 3]; 4] = [[0, 1, 2], [1, 0, 3], [2, 3, 0], [3, 2, 1]];

    pub const VERTEX_LATTICE: [(i32, i32); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let sides = [a, b, c];
        if sides.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidSpace(format!(
                "disphenoid sides must be positive and finite, got {sides:?}"
            )));
        }
        let (a2, b2, c2) = (a * a, b * b, c * c);
        if !(a2 + b2 > c2 && b2 + c2 > a2 && c2 + a2 > b2) {
            return Err(Error::InvalidSpace(format!(
                "disphenoid faces must be acute triangles, got sides {sides:?}"
            )));
        }
        let cos_a = (b2 + c2 - a2) / (2.0 * b * c);
        let sin_a = (1.0 - cos_a * cos_a).sqrt();
        Ok(Disphenoid {
            sides,
            b: Vec2::new(c, 0.0),
            c: Vec2::new(b * cos_a, b * sin_a),
        })
    }

    pub fn regular(side: f64) -> Result<Self> {
        Self::new(side, side, side)
    }

    pub fn sides(&self) -> [f64; 3] {
        self.sides
    }

    /// Net position of the face vertex `B`.
    pub fn vertex_b(&self) -> Vec2 {
        self.b
    }

    /// Net position of the face vertex `C`.
    pub fn vertex_c(&self) -> Vec2 {
        self.c
    }

    pub fn face_area(&self) -> f64 {
        0.5 * (self.b.x * self.c.y - self.b.y * self.c.x).abs()
    }

    /// Upper bound on the intrinsic diameter.
    pub fn diameter_bound(&self) -> f64 {
        self.sides.iter().sum()
    }

    pub fn lattice_point(&self, s: f64, t: f64) -> Vec2 {
        self.b * s + self.c * t
    }

    pub fn lattice_coords(&self, p: Vec2) -> (f64, f64) {
        let t = p.y / self.c.y;
        let s = (p.x - t * self.c.x) / self.b.x;
        (s, t)
    }

    /// Plane position of tetrahedron vertex `i` inside the net.
    pub fn vertex_position(&self, i: usize) -> Vec2 {
        let (s, t) = Self::VERTEX_LATTICE[i];
        self.lattice_point(f64::from(s), f64::from(t))
    }

    pub fn vertex_point(&self, i: usize) -> SurfacePoint {
        self.fold(self.vertex_position(i))
    }

    /// Net representative of a point given on a face.
    pub fn to_plane(&self, face: u8, bary: [f64; 3]) -> Vec2 {
        let corners = Self::FACE_CORNERS[face as usize];
        let (mut s, mut t) = (0.0, 0.0);
        for (w, (cs, ct)) in bary.iter().zip(corners) {
            s += w * f64::from(cs);
            t += w * f64::from(ct);
        }
        self.lattice_point(s, t)
    }

    /// Folds any plane point onto the surface and returns its canonical chart point.
    pub fn fold(&self, p: Vec2) -> SurfacePoint {
        let (s, t) = self.lattice_coords(p);
        let mut s = s.rem_euclid(2.0);
        let mut t = t.rem_euclid(2.0);
        if s + t > 2.0 {
            // half-turn about the net vertex B + C
            s = 2.0 - s;
            t = 2.0 - t;
        }
        canonical_net_point(s, t)
    }
}

fn face_bary(face: usize, s: f64, t: f64) -> [f64; 3] {
    let [p0, p1, p2] = Disphenoid::FACE_CORNERS[face];
    let (x0, y0) = (f64::from(p0.0), f64::from(p0.1));
    let (e1x, e1y) = (f64::from(p1.0) - x0, f64::from(p1.1) - y0);
    let (e2x, e2y) = (f64::from(p2.0) - x0, f64::from(p2.1) - y0);
    let det = e1x * e2y - e1y * e2x;
    let (dx, dy) = (s - x0, t - y0);
    let v = (dx * e2y - dy * e2x) / det;
    let w = (e1x * dy - e1y * dx) / det;
    [1.0 - v - w, v, w]
}

/// Canonical chart point for a net point `(s, t)` of the closed net triangle.
///
/// The boundary of the net is glued by half-turns about the three midline vertices, so
/// every surface point has at most four net representatives; the lowest face containing
/// any of them wins.
fn canonical_net_point(s: f64, t: f64) -> SurfacePoint {
    let candidates = [(s, t), (2.0 - s, -t), (-s, 2.0 - t), (2.0 - s, 2.0 - t)];
    let mut fallback = (0u8, [1.0, 0.0, 0.0], f64::NEG_INFINITY);
    for face in 0..4 {
        for &(cs, ct) in &candidates {
            let bary = face_bary(face, cs, ct);
            let lowest = bary.iter().copied().fold(f64::INFINITY, f64::min);
            if lowest >= -NET_EDGE_EPS {
                return SurfacePoint::Disphenoid { face: face as u8, bary: clamp_bary(bary) };
            }
            if lowest > fallback.2 {
                fallback = (face as u8, bary, lowest);
            }
        }
    }
    SurfacePoint::Disphenoid { face: fallback.0, bary: clamp_bary(fallback.1) }
}

fn clamp_bary(bary: [f64; 3]) -> [f64; 3] {
    let clamped = bary.map(|w| w.max(0.0));
    let total: f64 = clamped.iter().sum();
    clamped.map(|w| w / total)
}

/// A point in the chart of one of the spaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfacePoint {
    Plane { x: f64, y: f64 },
    Cone { r: f64, phi: f64 },
    Disphenoid { face: u8, bary: [f64; 3] },
}

impl SurfacePoint {
    pub fn xy(x: f64, y: f64) -> Self {
        SurfacePoint::Plane { x, y }
    }

    pub fn polar(r: f64, phi: f64) -> Self {
        SurfacePoint::Cone { r, phi }
    }

    pub fn on_face(face: u8, bary: [f64; 3]) -> Self {
        SurfacePoint::Disphenoid { face, bary }
    }

    pub fn from_vec(p: Vec2) -> Self {
        SurfacePoint::Plane { x: p.x, y: p.y }
    }

    /// Cartesian position for plane points.
    pub fn as_plane(&self) -> Option<Vec2> {
        match *self {
            SurfacePoint::Plane { x, y } => Some(Vec2::new(x, y)),
            _ => None,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            SurfacePoint::Plane { .. } => "plane",
            SurfacePoint::Cone { .. } => "cone",
            SurfacePoint::Disphenoid { .. } => "disphenoid",
        }
    }
}

impl Serialize for SurfacePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            SurfacePoint::Plane { x, y } => [x, y].serialize(serializer),
            SurfacePoint::Cone { r, phi } => [r, phi].serialize(serializer),
            SurfacePoint::Disphenoid { face, bary } => {
                let mut st = serializer.serialize_struct("SurfacePoint", 2)?;
                st.serialize_field("face", &face)?;
                st.serialize_field("bary", &bary)?;
                st.end()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SpaceRepr {
    Plane,
    Cone { total_angle: ConeAngle },
    Disphenoid { sides: [f64; 3] },
}

/// One of the supported intrinsic metric spaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr", into = "SpaceRepr")]
pub enum Space {
    Plane,
    Cone(Cone),
    Disphenoid(Disphenoid),
}

impl TryFrom<SpaceRepr> for Space {
    type Error = Error;

    fn try_from(repr: SpaceRepr) -> Result<Self> {
        match repr {
            SpaceRepr::Plane => Ok(Space::Plane),
            SpaceRepr::Cone { total_angle } => Cone::new(total_angle).map(Space::Cone),
            SpaceRepr::Disphenoid { sides: [a, b, c] } => Disphenoid::new(a, b, c).map(Space::Disphenoid),
        }
    }
}

impl From<Space> for SpaceRepr {
    fn from(space: Space) -> Self {
        match space {
            Space::Plane => SpaceRepr::Plane,
            Space::Cone(cone) => SpaceRepr::Cone { total_angle: cone.angle() },
            Space::Disphenoid(d) => SpaceRepr::Disphenoid { sides: d.sides() },
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Plane => write!(f, "plane"),
            Space::Cone(cone) => write!(f, "cone:{}", cone.angle()),
            Space::Disphenoid(d) => {
                let [a, b, c] = d.sides();
                write!(f, "disphenoid:{a},{b},{c}")
            }
        }
    }
}

impl FromStr for Space {
    type Err = Error;

    /// Parses `plane`, `cone:<radians>`, `cone:2pi/<k>`, `disphenoid:<a>,<b>,<c>` and
    /// `tetrahedron[:<side>]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, arg) = match s.split_once(':') {
            Some((kind, arg)) => (kind.trim(), Some(arg.trim())),
            None => (s, None),
        };
        match (kind, arg) {
            ("plane", None) => Ok(Space::Plane),
            ("cone", Some(angle)) => Space::cone(angle.parse()?),
            ("disphenoid", Some(sides)) => {
                let sides = sides
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::InvalidSpace(format!("cannot parse disphenoid sides `{sides}`")))?;
                match sides.as_slice() {
                    &[a, b, c] => Space::disphenoid(a, b, c),
                    _ => Err(Error::InvalidSpace("disphenoid needs three side lengths".into())),
                }
            }
            ("tetrahedron", side) => {
                let side = match side {
                    Some(side) => side
                        .parse()
                        .map_err(|_| Error::InvalidSpace(format!("cannot parse side `{side}`")))?,
                    None => 1.0,
                };
                Space::disphenoid(side, side, side)
            }
            _ => Err(Error::InvalidSpace(format!("unknown space `{s}`"))),
        }
    }
}

impl Space {
    pub fn cone(angle: ConeAngle) -> Result<Self> {
        Cone::new(angle).map(Space::Cone)
    }

    pub fn cone_radians(theta: f64) -> Result<Self> {
        Self::cone(ConeAngle::Radians(theta))
    }

    /// Cone of total angle `2π/k`.
    pub fn cone_sheets(k: u32) -> Result<Self> {
        Self::cone(ConeAngle::FullTurnOver(k))
    }

    pub fn disphenoid(a: f64, b: f64, c: f64) -> Result<Self> {
        Disphenoid::new(a, b, c).map(Space::Disphenoid)
    }

    pub fn regular_tetrahedron(side: f64) -> Result<Self> {
        Disphenoid::regular(side).map(Space::Disphenoid)
    }

    fn kind(&self) -> &'static str {
        match self {
            Space::Plane => "plane",
            Space::Cone(_) => "cone",
            Space::Disphenoid(_) => "disphenoid",
        }
    }

    /// Validates `p` for this space and returns its canonical representation.
    pub fn canonical(&self, p: SurfacePoint) -> Result<SurfacePoint> {
        match (self, p) {
            (Space::Plane, SurfacePoint::Plane { x, y }) => {
                if x.is_finite() && y.is_finite() {
                    Ok(p)
                } else {
                    Err(Error::InvalidPoint(format!("non-finite plane point ({x}, {y})")))
                }
            }
            (Space::Cone(cone), SurfacePoint::Cone { r, phi }) => {
                if !(r.is_finite() && phi.is_finite()) {
                    return Err(Error::InvalidPoint(format!("non-finite cone point ({r}, {phi})")));
                }
                if r < 0.0 {
                    return Err(Error::InvalidPoint(format!("negative cone radius {r}")));
                }
                if r == 0.0 {
                    return Ok(SurfacePoint::Cone { r: 0.0, phi: 0.0 });
                }
                Ok(SurfacePoint::Cone { r, phi: normalize_angle(phi, cone.total_angle()) })
            }
            (Space::Disphenoid(d), SurfacePoint::Disphenoid { face, bary }) => {
                if face > 3 {
                    return Err(Error::InvalidPoint(format!("face index {face} is not in 0..4")));
                }
                if bary.iter().any(|w| !w.is_finite() || *w < -BARY_SUM_TOLERANCE) {
                    return Err(Error::InvalidPoint(format!("barycentric coordinates {bary:?} out of range")));
                }
                let total: f64 = bary.iter().sum();
                if (total - 1.0).abs() > BARY_SUM_TOLERANCE {
                    return Err(Error::InvalidPoint(format!(
                        "barycentric coordinates {bary:?} sum to {total}, not 1"
                    )));
                }
                Ok(d.fold(d.to_plane(face, clamp_bary(bary))))
            }
            _ => Err(Error::InvalidPoint(format!(
                "{} point used in a {} space",
                p.kind(),
                self.kind()
            ))),
        }
    }

    pub fn canonical_all(&self, points: &[SurfacePoint]) -> Result<Vec<SurfacePoint>> {
        points.iter().map(|p| self.canonical(*p)).collect()
    }

    /// Intrinsic geodesic distance between two points of this space.
    pub fn distance(&self, p: SurfacePoint, q: SurfacePoint) -> Result<f64> {
        let p = self.canonical(p)?;
        let q = self.canonical(q)?;
        Ok(self.metric(&p, &q))
    }

    /// Distance between points already in canonical form for this space.
    pub(crate) fn metric(&self, p: &SurfacePoint, q: &SurfacePoint) -> f64 {
        match (self, p, q) {
            (Space::Plane, SurfacePoint::Plane { x: x1, y: y1 }, SurfacePoint::Plane { x: x2, y: y2 }) => {
                (x1 - x2).hypot(y1 - y2)
            }
            (Space::Cone(cone), SurfacePoint::Cone { r: r1, phi: p1 }, SurfacePoint::Cone { r: r2, phi: p2 }) => {
                cone_distance(cone.total_angle(), *r1, *p1, *r2, *p2)
            }
            (Space::Disphenoid(d), _, _) => covering::disphenoid_distance(d, p, q),
            _ => unreachable!("metric called with points of the wrong chart"),
        }
    }

    /// Largest pairwise distance.
    pub(crate) fn diameter_of(&self, points: &[SurfacePoint]) -> f64 {
        let mut best: f64 = 0.0;
        for (i, p) in points.iter().enumerate() {
            for q in &points[i + 1..] {
                best = best.max(self.metric(p, q));
            }
        }
        best
    }

    /// Canonicalizes `points` and rejects coincident pairs.
    pub(crate) fn distinct_points(&self, points: &[SurfacePoint], min: usize) -> Result<Vec<SurfacePoint>> {
        if points.len() < min {
            return Err(Error::TooFewPoints { min, got: points.len() });
        }
        let points = self.canonical_all(points)?;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if self.metric(&points[i], &points[j]) <= COINCIDENCE_EPS {
                    return Err(Error::DuplicatePoints { first: i, second: j });
                }
            }
        }
        Ok(points)
    }
}
