//! SVG output for disk laminations and planar polylines.
//!
//! Numbers are printed with six decimals on a 1000x1000 canvas so identical
//! inputs give byte-identical documents.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::angle::{q, Angle};
use crate::geom::q_to_f64;
use crate::lamination::{GapClass, Leaf};

const SIZE: f64 = 1000.0;
const CENTER: f64 = 500.0;
const RADIUS: f64 = 480.0;

pub const PLUS_COLOR: &str = "#1f4fd8";
pub const MINUS_COLOR: &str = "#d8281f";

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// Point of the unit circle at angle `t` (in turns), in canvas coordinates.
pub fn boundary_point(t: Angle) -> (f64, f64) {
    let a = 2.0 * PI * t.to_f64();
    (CENTER + RADIUS * a.cos(), CENTER - RADIUS * a.sin())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Geodesic {
    Diameter {
        from: (f64, f64),
        to: (f64, f64),
    },
    /// Arc of the circle orthogonal to the boundary, in canvas coordinates.
    Arc {
        from: (f64, f64),
        to: (f64, f64),
        center: (f64, f64),
        radius: f64,
        sweep: bool,
    },
}

/// Hyperbolic geodesic joining the endpoints of a leaf.
pub fn geodesic(leaf: &Leaf) -> Geodesic {
    let (a, b) = (leaf.a(), leaf.b());
    let from = boundary_point(a);
    let to = boundary_point(b);
    let len = leaf.length();
    if len == q(1, 2) {
        return Geodesic::Diameter { from, to };
    }
    // The orthogonal circle is centered on the bisector at distance
    // sec(half-angle) with radius tan(half-angle), in units of the disk radius.
    let lf = q_to_f64(len);
    let half = PI * lf;
    let start = if a.ccw_to(b) == len { a } else { b };
    let mid = start.to_f64() + 0.5 * lf;
    let m = 2.0 * PI * mid;
    let d = RADIUS / half.cos();
    let center = (CENTER + d * m.cos(), CENTER - d * m.sin());
    let radius = RADIUS * half.tan();
    let cross = (to.0 - from.0) * (center.1 - from.1) - (to.1 - from.1) * (center.0 - from.0);
    Geodesic::Arc { from, to, center, radius, sweep: cross > 0.0 }
}

fn geodesic_path(g: &Geodesic, start: bool) -> String {
    let mut s = String::new();
    match *g {
        Geodesic::Diameter { from, to } => {
            if start {
                let _ = write!(s, "M {} {} ", num(from.0), num(from.1));
            }
            let _ = write!(s, "L {} {}", num(to.0), num(to.1));
        }
        Geodesic::Arc { from, to, radius, sweep, .. } => {
            if start {
                let _ = write!(s, "M {} {} ", num(from.0), num(from.1));
            }
            let _ = write!(s, "A {r} {r} 0 0 {} {} {}", sweep as u8, num(to.0), num(to.1), r = num(radius));
        }
    }
    s
}

/// Leaf traversed from `from` to the other endpoint.
fn directed(leaf: &Leaf, from: Angle) -> Geodesic {
    let g = geodesic(leaf);
    if leaf.a() == from {
        return g;
    }
    match g {
        Geodesic::Diameter { from, to } => Geodesic::Diameter { from: to, to: from },
        Geodesic::Arc { from, to, center, radius, sweep } => {
            Geodesic::Arc { from: to, to: from, center, radius, sweep: !sweep }
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiskScene {
    pub plus: Vec<GapClass>,
    pub minus: Vec<GapClass>,
    pub plus_color: String,
    pub minus_color: String,
    pub stroke_width: f64,
}

impl DiskScene {
    pub fn new(plus: Vec<GapClass>, minus: Vec<GapClass>) -> DiskScene {
        DiskScene { plus, minus, plus_color: PLUS_COLOR.into(), minus_color: MINUS_COLOR.into(), stroke_width: 1.0 }
    }
}

fn class_path(c: &GapClass) -> String {
    let pts = c.angles();
    if pts.len() == 2 {
        return geodesic_path(&geodesic(&Leaf::new(pts[0], pts[1]).unwrap()), true);
    }
    let mut s = String::new();
    for (i, &p) in pts.iter().enumerate() {
        let q = pts[(i + 1) % pts.len()];
        if i > 0 {
            s.push(' ');
        }
        s.push_str(&geodesic_path(&directed(&Leaf::new(p, q).unwrap(), p), i == 0));
    }
    s.push_str(" Z");
    s
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {s} {s}" width="{s}" height="{s}">"#,
        s = SIZE
    );
}

pub fn render_disk_svg(scene: &DiskScene) -> String {
    let mut out = String::new();
    header(&mut out);
    let _ = writeln!(
        out,
        r#"<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="black" stroke-width="{w}"/>"#,
        c = num(CENTER),
        r = num(RADIUS),
        w = num(scene.stroke_width)
    );
    for (classes, color) in [(&scene.plus, &scene.plus_color), (&scene.minus, &scene.minus_color)] {
        let mut sorted = classes.clone();
        sorted.sort();
        sorted.dedup();
        let _ = writeln!(
            out,
            r#"<g stroke="{color}" stroke-width="{}" fill="{color}" fill-opacity="0.15">"#,
            num(scene.stroke_width)
        );
        for c in &sorted {
            let fill = if c.angles().len() >= 3 { "" } else { r#" fill="none""# };
            let _ = writeln!(out, r#"<path d="{}"{fill}/>"#, class_path(c));
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

#[derive(Clone, Debug)]
pub struct PolylineStyle {
    pub color: String,
    pub stroke_width: f64,
    pub closed: bool,
    /// Outline drawn behind the curve, e.g. a fundamental domain.
    pub outline: Option<Vec<(f64, f64)>>,
}

impl Default for PolylineStyle {
    fn default() -> Self {
        PolylineStyle { color: "black".into(), stroke_width: 1.0, closed: false, outline: None }
    }
}

/// Affine map of the data bounding box onto the canvas, aspect preserved and
/// y pointing up.
fn fit(points: impl Iterator<Item = (f64, f64)>) -> impl Fn((f64, f64)) -> (f64, f64) {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (x, y) in points {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-300);
    let margin = 20.0;
    let scale = (SIZE - 2.0 * margin) / span;
    let (ox, oy) = (
        margin + 0.5 * (SIZE - 2.0 * margin - scale * (x1 - x0)),
        margin + 0.5 * (SIZE - 2.0 * margin - scale * (y1 - y0)),
    );
    move |(x, y)| (ox + scale * (x - x0), SIZE - oy - scale * (y - y0))
}

fn poly_path(pts: &[(f64, f64)], closed: bool) -> String {
    let mut s = String::new();
    for (i, p) in pts.iter().enumerate() {
        let _ = write!(s, "{}{} {}", if i == 0 { "M " } else { " L " }, num(p.0), num(p.1));
    }
    if closed {
        s.push_str(" Z");
    }
    s
}

pub fn render_polyline_svg(points: &[(f64, f64)], style: &PolylineStyle) -> String {
    let extra = style.outline.iter().flatten().copied();
    let tf = fit(points.iter().copied().chain(extra));
    let mut out = String::new();
    header(&mut out);
    if let Some(o) = &style.outline {
        let pts: Vec<_> = o.iter().map(|p| tf(*p)).collect();
        let _ =
            writeln!(out, r#"<path d="{}" fill="none" stroke="gray" stroke-dasharray="4 4"/>"#, poly_path(&pts, true));
    }
    let pts: Vec<_> = points.iter().map(|p| tf(*p)).collect();
    let _ = writeln!(
        out,
        r#"<path d="{}" fill="none" stroke="{}" stroke-width="{}"/>"#,
        poly_path(&pts, style.closed),
        style.color,
        num(style.stroke_width)
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(a: (i128, i128), b: (i128, i128)) -> Leaf {
        Leaf::new(Angle::frac(a.0, a.1), Angle::frac(b.0, b.1)).unwrap()
    }

    fn on_circle(p: (f64, f64)) -> bool {
        ((p.0 - CENTER).hypot(p.1 - CENTER) - RADIUS).abs() < 1e-9
    }

    #[test]
    fn antipodal_is_diameter() {
        assert!(matches!(geodesic(&leaf((0, 1), (1, 2))), Geodesic::Diameter { .. }));
    }

    #[test]
    fn arc_is_orthogonal() {
        for l in [leaf((0, 1), (1, 4)), leaf((1, 3), (5, 6)), leaf((7, 8), (1, 8)), leaf((1, 12), (7, 12))] {
            let Geodesic::Arc { from, to, center, radius, .. } = geodesic(&l) else {
                if l.length() == q(1, 2) {
                    continue;
                }
                panic!("expected arc")
            };
            assert!(on_circle(from) && on_circle(to));
            for p in [from, to] {
                assert!(((p.0 - center.0).hypot(p.1 - center.1) - radius).abs() < 1e-9);
                // Radii of the two circles are perpendicular at the contact.
                let dot = (p.0 - CENTER) * (p.0 - center.0) + (p.1 - CENTER) * (p.1 - center.1);
                assert!(dot.abs() < 1e-6 * RADIUS * radius);
            }
        }
    }

    #[test]
    fn quarter_leaf_center() {
        // Center at distance sec(pi/4) along the bisector 1/8.
        let Geodesic::Arc { center, radius, .. } = geodesic(&leaf((0, 1), (1, 4))) else { panic!() };
        let d = (center.0 - CENTER).hypot(center.1 - CENTER);
        assert!((d - RADIUS * 2f64.sqrt()).abs() < 1e-9);
        assert!((radius - RADIUS).abs() < 1e-9);
        assert!(center.0 > CENTER && center.1 < CENTER);
    }

    #[test]
    fn arc_bends_inward() {
        // The arc midpoint lies inside the disk: sweep picks the minor arc
        // on the origin side of the chord.
        let l = leaf((1, 10), (3, 10));
        let Geodesic::Arc { from, to, center, radius, sweep } = geodesic(&l) else { panic!() };
        let chord_mid = ((from.0 + to.0) / 2.0, (from.1 + to.1) / 2.0);
        let v = (chord_mid.0 - center.0, chord_mid.1 - center.1);
        let n = v.0.hypot(v.1);
        let mid = (center.0 + radius * v.0 / n, center.1 + radius * v.1 / n);
        assert!((mid.0 - CENTER).hypot(mid.1 - CENTER) < RADIUS);
        let cross = (to.0 - from.0) * (center.1 - from.1) - (to.1 - from.1) * (center.0 - from.0);
        assert_eq!(sweep, cross > 0.0);
    }

    #[test]
    fn disk_render_is_deterministic() {
        let plus = vec![GapClass::new(vec![Angle::zero(), Angle::frac(1, 3), Angle::frac(2, 3)]).unwrap()];
        let minus = vec![leaf((1, 12), (7, 12)).to_class()];
        let a = render_disk_svg(&DiskScene::new(plus.clone(), minus.clone()));
        let b = render_disk_svg(&DiskScene::new(plus, minus));
        assert_eq!(a, b);
        assert!(a.contains(PLUS_COLOR) && a.contains(MINUS_COLOR));
        assert_eq!(a.matches("<path").count(), 2);
    }

    #[test]
    fn unit_segment_path() {
        let s = render_polyline_svg(&[(0.0, 0.0), (1.0, 0.0)], &PolylineStyle::default());
        assert_eq!(s.matches("<path").count(), 1);
        assert_eq!(s.matches(" L ").count(), 1);
        assert!(s.contains(r#"d="M 20.000000 500.000000 L 980.000000 500.000000""#));
    }
}
