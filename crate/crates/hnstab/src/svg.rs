//! Deterministic SVG emitters for the three figures: the tessellated disk
//! of translates, the region Phi, and the boundary circle with its three
//! marked points.

use crate::charge::TypeACharge;
use crate::embedding::{phi_vertices, pi_boundary, pi_interior, tessellation_triangles, SQRT2};
use std::fmt::Write as _;

struct Svg {
    body: String,
    width: f64,
    height: f64,
}

impl Svg {
    fn new(width: f64, height: f64) -> Self {
        Svg { body: String::new(), width, height }
    }

    fn polygon(&mut self, pts: &[(f64, f64)], fill: &str, stroke: &str) {
        let s: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let _ = writeln!(
            self.body,
            "<polygon points=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"0.5\"/>",
            s.join(" ")
        );
    }

    fn path(&mut self, d: &str, stroke: &str) {
        let _ = writeln!(
            self.body,
            "<path d=\"{d}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"0.8\"/>"
        );
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        let _ = writeln!(self.body, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{r}\" fill=\"{fill}\"/>");
    }

    fn text(&mut self, x: f64, y: f64, t: &str) {
        let _ = writeln!(
            self.body,
            "<text x=\"{x:.3}\" y=\"{y:.3}\" font-size=\"7\" font-family=\"monospace\" \
             text-anchor=\"middle\">{t}</text>"
        );
    }

    fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
             viewBox=\"0 0 {w} {h}\">\n{body}</svg>\n",
            w = self.width,
            h = self.height,
            body = self.body
        )
    }
}

/// Orthographic projection used for all three-dimensional figures.
fn project(v: &[f64; 3]) -> (f64, f64) {
    // view along (1,1,1): orthonormal in-plane axes
    let u = [1.0 / SQRT2, -1.0 / SQRT2, 0.0];
    let w = [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()];
    (
        v[0] * u[0] + v[1] * u[1] + v[2] * u[2],
        v[0] * w[0] + v[1] * w[1] + v[2] * w[2],
    )
}

fn to_canvas(p: (f64, f64), scale: f64, cx: f64, cy: f64) -> (f64, f64) {
    (cx + scale * p.0, cy - scale * p.1)
}

/// The tessellation of the disk by translates of the fundamental triangle,
/// drawn in pi-map coordinates; triangles up to generation `depth - 1` are
/// drawn and the shallow ones labelled.
pub fn exchange_graph_svg(tau: &TypeACharge, depth: u64) -> String {
    let mut svg = Svg::new(420.0, 420.0);
    let (scale, cx, cy) = (190.0, 210.0, 210.0);
    // unit circle for reference
    svg.path(
        &format!(
            "M {x0:.3} {y0:.3} A {r:.3} {r:.3} 0 1 0 {x1:.3} {y1:.3} A {r:.3} {r:.3} 0 1 0 {x0:.3} {y0:.3}",
            x0 = cx - scale,
            y0 = cy,
            x1 = cx + scale,
            y1 = cy,
            r = scale
        ),
        "#bbbbbb",
    );
    let gens = depth.saturating_sub(1);
    for t in tessellation_triangles(gens) {
        let pts: Vec<(f64, f64)> = t
            .vertices
            .iter()
            .map(|p| to_canvas(project(&pi_boundary(p)), scale, cx, cy))
            .collect();
        svg.polygon(&pts, "#e8f0fe", "#7793c4");
        if t.word.letters().len() <= 1 {
            let interior = pi_interior(tau, &t.word);
            let c = to_canvas(project(&interior), scale, cx, cy);
            let label = if t.word.is_empty() {
                "id".to_string()
            } else {
                t.word.to_string()
            };
            svg.text(c.0, c.1, &label);
        }
    }
    for (p, name) in [
        (crate::psl2::ProjPoint::new(1, 0), "P1"),
        (crate::psl2::ProjPoint::new(0, 1), "P2"),
        (crate::psl2::ProjPoint::new(1, -1), "X"),
    ] {
        let c = to_canvas(project(&pi_boundary(&p)), scale, cx, cy);
        svg.circle(c.0, c.1, 2.0, "#222222");
        svg.text(c.0, c.1 - 5.0, name);
    }
    svg.finish()
}

/// The region Phi: the central triangle plus the three circular segments.
pub fn phi_region_svg() -> String {
    let mut svg = Svg::new(420.0, 420.0);
    let (scale, cx, cy) = (190.0, 210.0, 210.0);
    let verts = phi_vertices();
    let tri: Vec<(f64, f64)> = verts
        .iter()
        .map(|v| to_canvas(project(v), scale, cx, cy))
        .collect();
    svg.polygon(&tri, "#dce7f7", "#5577aa");
    // geodesic arcs between vertex pairs
    for (i, j) in [(0usize, 1usize), (1, 2), (2, 0)] {
        let a = verts[i];
        let b = verts[j];
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let angle = dot.clamp(-1.0, 1.0).acos();
        // orthonormalise b against a
        let mut bp = [0.0; 3];
        for k in 0..3 {
            bp[k] = b[k] - dot * a[k];
        }
        let nb = (bp[0] * bp[0] + bp[1] * bp[1] + bp[2] * bp[2]).sqrt();
        for k in 0..3 {
            bp[k] /= nb;
        }
        let mut d = String::new();
        for step in 0..=32 {
            let t = angle * step as f64 / 32.0;
            let v = [
                t.cos() * a[0] + t.sin() * bp[0],
                t.cos() * a[1] + t.sin() * bp[1],
                t.cos() * a[2] + t.sin() * bp[2],
            ];
            let c = to_canvas(project(&v), scale, cx, cy);
            if step == 0 {
                let _ = write!(d, "M {:.3} {:.3}", c.0, c.1);
            } else {
                let _ = write!(d, " L {:.3} {:.3}", c.0, c.1);
            }
        }
        svg.path(&d, "#33404f");
    }
    for (v, name) in tri.iter().zip(["pi(P1)", "pi(P2)", "pi(X)"]) {
        svg.circle(v.0, v.1, 2.0, "#222222");
        svg.text(v.0, v.1 - 5.0, name);
    }
    svg.finish()
}

/// The boundary circle with the three special points and arc labels.
pub fn boundary_circle_svg() -> String {
    let mut svg = Svg::new(420.0, 420.0);
    let (r, cx, cy) = (170.0, 210.0, 210.0);
    svg.path(
        &format!(
            "M {x0:.3} {y0:.3} A {r} {r} 0 1 0 {x1:.3} {y1:.3} A {r} {r} 0 1 0 {x0:.3} {y0:.3}",
            x0 = cx - r,
            y0 = cy,
            x1 = cx + r,
            y1 = cy,
        ),
        "#333333",
    );
    // P1 at angle 60, P2 at -60, X at 180 (as in the circle picture)
    let marks = [(60f64, "P1 = [1:0]"), (-60.0, "P2 = [0:1]"), (180.0, "X = [-1:1]")];
    for (deg, name) in marks {
        let t = deg.to_radians();
        let (x, y) = (cx + r * t.cos(), cy - r * t.sin());
        svg.circle(x, y, 2.5, "#222222");
        let (lx, ly) = (cx + (r + 18.0) * t.cos(), cy - (r + 18.0) * t.sin());
        svg.text(lx, ly, name);
    }
    for (deg, name) in [(0f64, "[P1,P2]"), (120.0, "[X,P1]"), (240.0, "[P2,X]")] {
        let t = deg.to_radians();
        let (x, y) = (cx + (r - 24.0) * t.cos(), cy - (r - 24.0) * t.sin());
        svg.text(x, y, name);
    }
    svg.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Quiver;

    #[test]
    fn deterministic_and_wellformed() {
        let tau = TypeACharge::from_ints(Quiver::A2, (1, 0), (0, 1)).unwrap();
        let a = exchange_graph_svg(&tau, 3);
        let b = exchange_graph_svg(&tau, 3);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
        // depth 3 draws 1 + 3 + 6 labelled/unlabelled triangles
        assert_eq!(a.matches("<polygon").count(), 10);
        let p = phi_region_svg();
        assert!(p.contains("pi(P1)"));
        let c = boundary_circle_svg();
        assert!(c.contains("[P2,X]"));
    }
}
