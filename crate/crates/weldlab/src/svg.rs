//! Minimal SVG scene writer. Geodesics are emitted as exact circle arcs.

use num_complex::Complex64 as C64;
use std::fmt::Write;

/// Pixels per unit of scene coordinates.
const SCALE: f64 = 400.0;
const MARGIN: f64 = 20.0;
/// Slack allowed for disk-layer points outside the closed unit disk.
pub const DISK_CLAMP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub stroke: String,
    pub fill: String,
    pub width: f64,
    pub opacity: f64,
}

impl Style {
    pub fn stroke(color: &str, width: f64) -> Self {
        Style {
            stroke: color.to_string(),
            fill: "none".to_string(),
            width,
            opacity: 1.0,
        }
    }

    pub fn fill(color: &str, opacity: f64) -> Self {
        Style {
            stroke: "none".to_string(),
            fill: color.to_string(),
            width: 0.0,
            opacity,
        }
    }

    pub fn outlined(mut self, stroke: &str, width: f64) -> Self {
        self.stroke = stroke.to_string();
        self.width = width;
        self
    }

    fn attrs(&self) -> String {
        let mut s = format!(
            "fill=\"{}\" stroke=\"{}\" stroke-width=\"{}\"",
            self.fill,
            self.stroke,
            num(self.width)
        );
        if self.opacity < 1.0 {
            let _ = write!(s, " fill-opacity=\"{}\"", num(self.opacity));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    Circle { center: C64, radius: f64, style: Style },
    /// Hyperbolic geodesic segment; endpoints may be ideal (|z| = 1).
    Geodesic { from: C64, to: C64, style: Style },
    /// Region bounded by consecutive geodesic segments through the given points.
    GeodesicPolygon { points: Vec<C64>, style: Style },
    /// Region between the geodesic joining two ideal points and the boundary arc
    /// running counterclockwise from `from` to `to`.
    Pocket { from: f64, to: f64, style: Style },
    Segment { a: C64, b: C64, style: Style },
    Point { at: C64, radius: f64, label: Option<String>, style: Style },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Viewport {
    /// The closed unit disk.
    Disk,
    Plane { min: C64, max: C64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderScene {
    pub viewport: Viewport,
    pub layers: Vec<Vec<Primitive>>,
}

impl RenderScene {
    pub fn disk() -> Self {
        RenderScene {
            viewport: Viewport::Disk,
            layers: Vec::new(),
        }
    }

    pub fn plane(min: C64, max: C64) -> Self {
        RenderScene {
            viewport: Viewport::Plane { min, max },
            layers: Vec::new(),
        }
    }

    pub fn layer(&mut self, primitives: Vec<Primitive>) {
        self.layers.push(primitives);
    }
}

/// Fixed-precision number formatting, with negative zero normalized.
fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Pull a disk-layer point back into the closed unit disk.
fn clamp_disk(z: C64) -> C64 {
    let r = z.norm();
    if r > 1.0 {
        debug_assert!(r <= 1.0 + DISK_CLAMP, "point {z} outside the disk");
        z / r
    } else {
        z
    }
}

/// Circle carrying the geodesic through `a` and `b`: Some((center, radius, clockwise))
/// or None when the geodesic is a diameter. `clockwise` is the direction of travel
/// from `a` to `b` along the arc inside the disk, in math orientation.
pub fn geodesic_circle(a: C64, b: C64) -> Option<(C64, f64, bool)> {
    // Circles orthogonal to the unit circle are {|z|² − 2Re(z c̄) + 1 = 0}.
    // Solve Re(a c̄) = (|a|² + 1)/2 and the same for b.
    let det = a.re * b.im - a.im * b.re;
    if det.abs() < 1e-12 {
        return None;
    }
    let ra = (a.norm_sqr() + 1.0) / 2.0;
    let rb = (b.norm_sqr() + 1.0) / 2.0;
    let c = C64::new((ra * b.im - rb * a.im) / det, (a.re * rb - b.re * ra) / det);
    let radius = (c.norm_sqr() - 1.0).max(0.0).sqrt();
    // The arc between a and b bulges away from c, so it turns clockwise about c
    // exactly when c lies to the right of a → b.
    let (u, v) = (b - a, c - a);
    let clockwise = u.re * v.im - u.im * v.re < 0.0;
    Some((c, radius, clockwise))
}

/// SVG path data for a geodesic from `a` to `b`, continuing a path already at `a`.
fn geodesic_path(a: C64, b: C64, to: impl Fn(C64) -> (f64, f64)) -> String {
    let (x, y) = to(b);
    match geodesic_circle(a, b) {
        None => format!(" L {} {}", num(x), num(y)),
        Some((_, radius, clockwise)) => {
            // SVG sweep 1 turns clockwise on screen, which with y flipped is clockwise
            // in math orientation as well.
            let sweep = if clockwise { 1 } else { 0 };
            let r = num(radius * SCALE);
            format!(" A {r} {r} 0 0 {sweep} {} {}", num(x), num(y))
        }
    }
}

pub fn render_svg(scene: &RenderScene) -> String {
    let (min, max) = match scene.viewport {
        Viewport::Disk => (C64::new(-1.0, -1.0), C64::new(1.0, 1.0)),
        Viewport::Plane { min, max } => (min, max),
    };
    let disk = matches!(scene.viewport, Viewport::Disk);
    let width = (max.re - min.re) * SCALE + 2.0 * MARGIN;
    let height = (max.im - min.im) * SCALE + 2.0 * MARGIN;
    let to = |z: C64| {
        let z = if disk { clamp_disk(z) } else { z };
        (
            (z.re - min.re) * SCALE + MARGIN,
            (max.im - z.im) * SCALE + MARGIN,
        )
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = num(width),
        h = num(height)
    );
    if disk {
        let (cx, cy) = to(C64::new(0.0, 0.0));
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>",
            num(cx),
            num(cy),
            num(SCALE)
        );
    }
    for layer in &scene.layers {
        out.push_str("<g>\n");
        for prim in layer {
            render_primitive(&mut out, prim, &to);
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn render_primitive(out: &mut String, prim: &Primitive, to: &impl Fn(C64) -> (f64, f64)) {
    let move_to = |z: C64| {
        let (x, y) = to(z);
        format!("M {} {}", num(x), num(y))
    };
    match prim {
        Primitive::Circle {
            center,
            radius,
            style,
        } => {
            let (cx, cy) = to(*center);
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" {}/>",
                num(cx),
                num(cy),
                num(radius * SCALE),
                style.attrs()
            );
        }
        Primitive::Geodesic { from, to: end, style } => {
            let d = move_to(*from) + &geodesic_path(*from, *end, to);
            let _ = writeln!(out, "<path d=\"{d}\" {}/>", style.attrs());
        }
        Primitive::GeodesicPolygon { points, style } => {
            if points.len() < 2 {
                return;
            }
            let mut d = move_to(points[0]);
            for k in 0..points.len() {
                let next = points[(k + 1) % points.len()];
                d += &geodesic_path(points[k], next, to);
            }
            d += " Z";
            let _ = writeln!(out, "<path d=\"{d}\" {}/>", style.attrs());
        }
        Primitive::Pocket { from, to: end, style } => {
            let a = C64::from_polar(1.0, *from);
            let b = C64::from_polar(1.0, *end);
            let mut d = move_to(a) + &geodesic_path(a, b, to);
            // Back along the unit circle clockwise from b to a.
            let span = (end - from).rem_euclid(std::f64::consts::TAU);
            let large = if span > std::f64::consts::PI { 1 } else { 0 };
            let (x, y) = to(a);
            let r = num(SCALE);
            let _ = write!(d, " A {r} {r} 0 {large} 1 {} {} Z", num(x), num(y));
            let _ = writeln!(out, "<path d=\"{d}\" {}/>", style.attrs());
        }
        Primitive::Segment { a, b, style } => {
            let (x1, y1) = to(*a);
            let (x2, y2) = to(*b);
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" {}/>",
                num(x1),
                num(y1),
                num(x2),
                num(y2),
                style.attrs()
            );
        }
        Primitive::Point {
            at,
            radius,
            label,
            style,
        } => {
            let (x, y) = to(*at);
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" {}/>",
                num(x),
                num(y),
                num(*radius),
                style.attrs()
            );
            if let Some(text) = label {
                let _ = writeln!(
                    out,
                    "<text x=\"{}\" y=\"{}\" font-size=\"12\" font-family=\"sans-serif\">{}</text>",
                    num(x + radius + 2.0),
                    num(y - radius - 2.0),
                    escape(text)
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    #[test]
    fn geodesic_circle_is_orthogonal_and_through_endpoints() {
        let a = C64::from_polar(1.0, 0.3);
        let b = C64::from_polar(1.0, 1.9);
        let (c, r, _) = geodesic_circle(a, b).unwrap();
        assert!(((a - c).norm() - r).abs() < 1e-12);
        assert!(((b - c).norm() - r).abs() < 1e-12);
        assert!((c.norm_sqr() - 1.0 - r * r).abs() < 1e-12);
        // Radius tan(Δ/2) for ideal endpoints Δ apart.
        assert!((r - (1.6f64 / 2.0).tan()).abs() < 1e-12);
    }

    #[test]
    fn arc_direction_stays_inside_the_disk() {
        let (a, b) = (C64::from_polar(1.0, 0.0), C64::from_polar(1.0, FRAC_PI_2));
        let (c, r, clockwise) = geodesic_circle(a, b).unwrap();
        // Step a little from a in the chosen direction and check we are inside.
        let t0 = (a - c).arg();
        let step = if clockwise { -0.01 } else { 0.01 };
        let z = c + C64::from_polar(r, t0 + step);
        assert!(z.norm() < 1.0);
        let (_, _, back) = geodesic_circle(b, a).unwrap();
        assert_ne!(clockwise, back);
        // Interior endpoints: the midpoint of the chosen arc is nearer the origin than c.
        for (a, b) in [
            (C64::new(0.5, 0.1), C64::new(-0.2, 0.6)),
            (C64::new(-0.5, -0.1), C64::new(0.3, -0.7)),
            (C64::new(0.1, 0.0), C64::from_polar(1.0, 2.0)),
        ] {
            let (c, r, clockwise) = geodesic_circle(a, b).unwrap();
            let (ta, tb) = ((a - c).arg(), (b - c).arg());
            let mut sweep = tb - ta;
            if clockwise && sweep > 0.0 {
                sweep -= TAU;
            } else if !clockwise && sweep < 0.0 {
                sweep += TAU;
            }
            assert!(sweep.abs() < PI, "{a} {b}");
            let mid = c + C64::from_polar(r, ta + sweep / 2.0);
            assert!(mid.norm() < 1.0, "{a} {b}");
        }
    }

    #[test]
    fn diameters_are_lines() {
        assert!(geodesic_circle(C64::new(1.0, 0.0), C64::from_polar(1.0, PI)).is_none());
        assert!(geodesic_circle(C64::new(0.0, 0.0), C64::new(0.0, 1.0)).is_none());
    }

    #[test]
    fn empty_scene_is_just_the_viewport() {
        let svg = render_svg(&RenderScene::disk());
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 1);
    }

    #[test]
    fn numbers_are_normalized() {
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1.5), "1.5");
        assert_eq!(num(2.0), "2");
    }
}
