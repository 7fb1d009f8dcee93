//! Single-tree SVG drawings.

use std::fmt::Write as _;
use std::path::Path;

use crate::space::Vec2;
use crate::spanning::Role;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 20.0;

/// One `<line>` per edge and one `<circle>` per vertex.
pub fn render(positions: &[Vec2], roles: &[Role], edges: &[(usize, usize)]) -> String {
    let lo = positions.iter().fold(Vec2::repeat(f64::INFINITY), |m, p| m.inf(p));
    let hi = positions.iter().fold(Vec2::repeat(f64::NEG_INFINITY), |m, p| m.sup(p));
    let span = (hi - lo).max().max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let at = |p: &Vec2| (MARGIN + (p.x - lo.x) * scale, SIZE - MARGIN - (p.y - lo.y) * scale);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"<g stroke="black" stroke-width="1.5">"#);
    for &(a, b) in edges {
        let ((x1, y1), (x2, y2)) = (at(&positions[a]), at(&positions[b]));
        let _ = writeln!(svg, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
    }
    let _ = writeln!(svg, "</g>");
    for (p, role) in positions.iter().zip(roles) {
        let (x, y) = at(p);
        let (r, fill) = match role {
            Role::Terminal => (4.0, "black"),
            Role::Steiner => (3.0, "crimson"),
        };
        let _ = writeln!(svg, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{r}" fill="{fill}"/>"#);
    }
    svg.push_str("</svg>\n");
    svg
}

/// Writes through a sibling temporary file so readers never see a partial drawing.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}
