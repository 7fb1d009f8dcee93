use std::f64::consts::FRAC_PI_3;

use crate::space::Vec2;

const WIDE_ANGLE_COS: f64 = -0.5;

/// Point minimizing the sum of distances to `a`, `b` and `c`.
///
/// A vertex whose angle is at least 120 degrees (or that coincides with another
/// vertex) is its own minimizer; otherwise the Torricelli point, from its
/// barycentric form `|BC| / sin(A + 60°) : |CA| / sin(B + 60°) : |AB| / sin(C + 60°)`.
pub fn fermat_point(a: Vec2, b: Vec2, c: Vec2) -> Vec2 {
    let (ab, bc, ca) = ((b - a).norm(), (c - b).norm(), (a - c).norm());
    if ab == 0.0 || ca == 0.0 {
        return a;
    }
    if bc == 0.0 {
        return b;
    }
    let angle = |p: Vec2, q: Vec2, r: Vec2| {
        let (u, v) = (q - p, r - p);
        (u.x * v.y - u.y * v.x).abs().atan2(u.dot(&v))
    };
    let (angle_a, angle_b, angle_c) = (angle(a, b, c), angle(b, c, a), angle(c, a, b));
    if angle_a.cos() <= WIDE_ANGLE_COS {
        return a;
    }
    if angle_b.cos() <= WIDE_ANGLE_COS {
        return b;
    }
    if angle_c.cos() <= WIDE_ANGLE_COS {
        return c;
    }
    let wa = bc / (angle_a + FRAC_PI_3).sin();
    let wb = ca / (angle_b + FRAC_PI_3).sin();
    let wc = ab / (angle_c + FRAC_PI_3).sin();
    (a * wa + b * wb + c * wc) / (wa + wb + wc)
}
