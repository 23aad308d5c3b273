//! Möbius and anti-Möbius maps of the unit disk, geodesics and ideal polygons.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;
use thiserror::Error;

pub type C64 = Complex64;

/// Default geometric tolerance when `WELDLAB_TOL` is unset.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Separation below which two boundary angles are treated as equal.
pub const ANGLE_EPS: f64 = 1e-12;

/// Tolerance used by geometric predicates. Reads `WELDLAB_TOL` once.
pub fn default_tolerance() -> f64 {
    static TOL: OnceLock<f64> = OnceLock::new();
    *TOL.get_or_init(|| {
        std::env::var("WELDLAB_TOL")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|t| (1e-14..=1e-3).contains(t))
            .unwrap_or(DEFAULT_TOL)
    })
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("geodesic endpoints coincide ({theta1} and {theta2})")]
    CoincidentEndpoints { theta1: f64, theta2: f64 },
    #[error("geodesics are not disjoint; no common perpendicular")]
    NotDisjoint,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("singular matrix")]
    Singular,
}

/// Reduce an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Counterclockwise angular distance from `from` to `to`, in `[0, 2π)`.
pub fn ccw_distance(from: f64, to: f64) -> f64 {
    wrap_angle(to - from)
}

/// Shortest signed angular difference `a - b`, in `(-π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Whether `theta` lies in the open ccw arc from `start` to `end`.
pub fn in_open_arc(theta: f64, start: f64, end: f64) -> bool {
    let len = ccw_distance(start, end);
    let len = if len == 0.0 { TAU } else { len };
    let t = ccw_distance(start, theta);
    t > 0.0 && t < len
}

pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Hyperbolic distance in the Poincaré disk.
pub fn hyperbolic_distance(z: C64, w: C64) -> f64 {
    let num = (z - w).norm();
    let den = (C64::new(1.0, 0.0) - z.conj() * w).norm();
    2.0 * (num / den).min(1.0 - 1e-16).atanh()
}

/// A 2×2 complex matrix acting by `z ↦ (az+b)/(cz+d)`, normalized to determinant 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl MobiusMap {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self, GeometryError> {
        let det = a * d - b * c;
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if !(det.norm() > 1e-300) || det.norm() < 1e-24 * scale * scale {
            return Err(GeometryError::Singular);
        }
        Ok(Self::normalized(a, b, c, d))
    }

    fn normalized(a: C64, b: C64, c: C64, d: C64) -> Self {
        let s = (a * d - b * c).sqrt();
        let mut m = MobiusMap {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        };
        m.canonicalize_sign();
        m
    }

    /// Choose the sign so that the first non-negligible entry has argument in (−π/2, π/2].
    fn canonicalize_sign(&mut self) {
        let entries = [self.a, self.b, self.c, self.d];
        let scale = entries.iter().map(|e| e.norm()).fold(0.0, f64::max);
        if let Some(first) = entries.iter().find(|e| e.norm() > 1e-12 * scale) {
            let arg = first.arg();
            if !(arg > -PI / 2.0 && arg <= PI / 2.0) {
                self.a = -self.a;
                self.b = -self.b;
                self.c = -self.c;
                self.d = -self.d;
            }
        }
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        MobiusMap {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    /// Rotation `z ↦ e^{iφ} z`.
    pub fn rotation(phi: f64) -> Self {
        let h = cis(phi / 2.0);
        Self::normalized(h, C64::new(0.0, 0.0), C64::new(0.0, 0.0), h.conj())
    }

    /// Disk automorphism `z ↦ (z + q)/(1 + q̄ z)` sending 0 to `q`.
    pub fn translation_from_origin(q: C64) -> Self {
        let one = C64::new(1.0, 0.0);
        Self::normalized(one, q, q.conj(), one)
    }

    pub fn apply(&self, z: C64) -> C64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// Action on the boundary circle in angle coordinates.
    pub fn apply_angle(&self, theta: f64) -> f64 {
        wrap_angle(self.apply(cis(theta)).arg())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        Self::normalized(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    pub fn inverse(&self) -> MobiusMap {
        Self::normalized(self.d, -self.b, -self.c, self.a)
    }

    pub fn pow(&self, k: i64) -> MobiusMap {
        let base = if k < 0 { self.inverse() } else { *self };
        let mut acc = MobiusMap::identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// Entries with complex conjugation applied, i.e. the map `z ↦ conj(f(conj z))`.
    pub fn conj(&self) -> MobiusMap {
        Self::normalized(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    /// Equality of maps, i.e. of matrices up to an overall sign.
    pub fn approx_eq(&self, other: &MobiusMap, tol: f64) -> bool {
        let diff = |s: f64| {
            [
                self.a - other.a * s,
                self.b - other.b * s,
                self.c - other.c * s,
                self.d - other.d * s,
            ]
            .iter()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
        };
        diff(1.0) < tol || diff(-1.0) < tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&MobiusMap::identity(), tol)
    }

    /// SU(1,1) test: `d = conj(a)` and `c = conj(b)` up to a common unimodular scalar.
    pub fn is_disk_preserving(&self, tol: f64) -> bool {
        // A disk map is M = λ [[α, β],[β̄, ᾱ]] with |λ| = 1, so a/conj(d) = b/conj(c) = λ².
        let lam2 = if self.a.norm() > self.b.norm() {
            self.a / self.d.conj()
        } else {
            self.b / self.c.conj()
        };
        if !lam2.norm().is_finite() || (lam2.norm() - 1.0).abs() > tol {
            return false;
        }
        (self.d.conj() * lam2 - self.a).norm() < tol && (self.c.conj() * lam2 - self.b).norm() < tol
    }

    /// Fixed points of the map (one or two, or none when it is the identity).
    pub fn fixed_points(&self) -> Vec<C64> {
        // c z² + (d − a) z − b = 0
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        if c.norm() < 1e-14 {
            if (d - a).norm() < 1e-14 {
                return vec![];
            }
            return vec![b / (d - a)];
        }
        let disc = ((d - a) * (d - a) + 4.0 * b * c).sqrt();
        let z1 = ((a - d) + disc) / (2.0 * c);
        let z2 = ((a - d) - disc) / (2.0 * c);
        if (z1 - z2).norm() < 1e-12 {
            vec![z1]
        } else {
            vec![z1, z2]
        }
    }
}

/// Matrix product `f ∘ g`, renormalized.
pub fn compose(f: &MobiusMap, g: &MobiusMap) -> MobiusMap {
    f.compose(g)
}

/// The map `z ↦ m(conj(z))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntiMobiusMap {
    pub m: MobiusMap,
}

impl AntiMobiusMap {
    pub fn apply(&self, z: C64) -> C64 {
        self.m.apply(z.conj())
    }

    /// `self ∘ other` for two anti-Möbius maps.
    pub fn compose(&self, other: &AntiMobiusMap) -> MobiusMap {
        self.m.compose(&other.m.conj())
    }

    /// `self ∘ g` for a Möbius map `g`.
    pub fn compose_mobius(&self, g: &MobiusMap) -> AntiMobiusMap {
        AntiMobiusMap {
            m: self.m.compose(&g.conj()),
        }
    }

    /// `g ∘ self`.
    pub fn precomposed_by(&self, g: &MobiusMap) -> AntiMobiusMap {
        AntiMobiusMap { m: g.compose(&self.m) }
    }
}

/// A hyperbolic geodesic given by its ideal endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    pub theta1: f64,
    pub theta2: f64,
    /// Euclidean center of the supporting circle; `None` for a diameter.
    pub center: Option<C64>,
    /// Euclidean radius of the supporting circle; infinite for a diameter.
    pub radius: f64,
}

impl Geodesic {
    pub fn is_diameter(&self) -> bool {
        self.center.is_none()
    }

    pub fn endpoints(&self) -> (C64, C64) {
        (cis(self.theta1), cis(self.theta2))
    }

    /// Direction of the point of the geodesic closest to the origin, and that point.
    fn closest_point(&self) -> C64 {
        match self.center {
            None => C64::new(0.0, 0.0),
            Some(c) => {
                let dist = c.norm() - self.radius;
                c / c.norm() * dist
            }
        }
    }

    /// A disk automorphism carrying the real diameter onto this geodesic,
    /// with −1 ↦ `theta1` and 1 ↦ `theta2`.
    pub fn from_diameter_map(&self) -> MobiusMap {
        let q = self.closest_point();
        let t = MobiusMap::translation_from_origin(q);
        let pre = t.inverse();
        let phi = pre.apply(cis(self.theta2)).arg();
        t.compose(&MobiusMap::rotation(phi))
    }

    /// The point at signed hyperbolic arclength `s` from the point closest to the origin,
    /// moving toward `theta2` for positive `s`.
    pub fn point_at(&self, s: f64) -> C64 {
        self.from_diameter_map()
            .apply(C64::new((s / 2.0).tanh(), 0.0))
    }

    /// Hyperbolic distance from `z` to the geodesic.
    pub fn distance_to(&self, z: C64) -> f64 {
        let w = self.from_diameter_map().inverse().apply(z);
        let denom = (1.0 - w.norm_sqr()).max(1e-300);
        (2.0 * w.im.abs() / denom).asinh()
    }

    /// Euclidean residual of `z` from the supporting circle or line.
    pub fn residual(&self, z: C64) -> f64 {
        match self.center {
            Some(c) => ((z - c).norm() - self.radius).abs(),
            None => {
                let u = cis(self.theta1);
                (z * u.conj()).im.abs()
            }
        }
    }

    /// Whether `z` lies in the region bounded by the geodesic and the ccw arc
    /// from `theta1` to `theta2`.
    pub fn in_ccw_region(&self, z: C64) -> bool {
        self.ccw_region_signed(z) > 0.0
    }

    /// Positive inside the ccw region, negative on the other side, zero on the geodesic.
    pub fn ccw_region_signed(&self, z: C64) -> f64 {
        let w = self.from_diameter_map().inverse().apply(z);
        // Under the normalizing map the ccw arc from −1 to 1 is the lower half.
        -w.im
    }
}

/// Geodesic with the given ideal endpoints (angles in radians).
pub fn geodesic_between(theta1: f64, theta2: f64) -> Result<Geodesic, GeometryError> {
    let t1 = wrap_angle(theta1);
    let t2 = wrap_angle(theta2);
    let d = ccw_distance(t1, t2);
    if d.min(TAU - d) < ANGLE_EPS {
        return Err(GeometryError::CoincidentEndpoints {
            theta1,
            theta2,
        });
    }
    if (d - PI).abs() < ANGLE_EPS {
        return Ok(Geodesic {
            theta1: t1,
            theta2: t2,
            center: None,
            radius: f64::INFINITY,
        });
    }
    let (mid, half) = if d < PI {
        (t1 + d / 2.0, d / 2.0)
    } else {
        (t2 + (TAU - d) / 2.0, (TAU - d) / 2.0)
    };
    Ok(Geodesic {
        theta1: t1,
        theta2: t2,
        center: Some(cis(mid) / half.cos()),
        radius: half.tan(),
    })
}

/// Anti-Möbius reflection fixing `g` pointwise.
pub fn reflect(g: &Geodesic) -> AntiMobiusMap {
    let m = match g.center {
        Some(c) => MobiusMap::normalized(c, C64::new(-1.0, 0.0), C64::new(1.0, 0.0), -c.conj()),
        None => {
            let h = cis(g.theta1);
            MobiusMap::normalized(h, C64::new(0.0, 0.0), C64::new(0.0, 0.0), h.conj())
        }
    };
    AntiMobiusMap { m }
}

/// The unique geodesic orthogonal to two disjoint geodesics.
pub fn common_perpendicular(g1: &Geodesic, g2: &Geodesic) -> Result<Geodesic, GeometryError> {
    let tol = default_tolerance();
    let h = reflect(g1).compose(&reflect(g2));
    if h.trace().norm() <= 2.0 + tol {
        return Err(GeometryError::NotDisjoint);
    }
    let fps = h.fixed_points();
    if fps.len() != 2 {
        return Err(GeometryError::NotDisjoint);
    }
    let (t1, mut t2) = (fps[0].arg(), fps[1].arg());
    // Snap numerically antipodal endpoints onto the diameter representation.
    if (ccw_distance(t1, t2) - PI).abs() < tol {
        t2 = t1 + PI;
    }
    geodesic_between(t1, t2)
}

/// An ideal polygon with cyclically ordered vertex angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealPolygon {
    pub vertices: Vec<f64>,
    pub sides: Vec<Geodesic>,
}

impl IdealPolygon {
    pub fn from_vertices(vertices: Vec<f64>) -> Result<Self, GeometryError> {
        let k = vertices.len();
        if k < 2 {
            return Err(GeometryError::DegenerateInput(format!(
                "an ideal polygon needs at least 2 vertices, got {k}"
            )));
        }
        let total: f64 = (0..k)
            .map(|i| ccw_distance(vertices[i], vertices[(i + 1) % k]))
            .sum();
        if (total - TAU).abs() > 1e-9 {
            return Err(GeometryError::DegenerateInput(
                "vertices are not strictly increasing cyclically".into(),
            ));
        }
        let sides = (0..k)
            .map(|i| geodesic_between(vertices[i], vertices[(i + 1) % k]))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IdealPolygon { vertices, sides })
    }

    /// Whether `z` lies in the open polygon, i.e. outside every pocket.
    pub fn contains_interior(&self, z: C64) -> bool {
        z.norm() < 1.0 && self.sides.iter().all(|s| s.ccw_region_signed(z) < 0.0)
    }

    /// Index of the side whose pocket contains `z`, if any.
    pub fn pocket_of(&self, z: C64) -> Option<usize> {
        self.sides.iter().position(|s| s.in_ccw_region(z))
    }
}

/// The regular ideal polygon with `n·p` vertices at the `np`-th roots of unity.
pub fn regular_ideal_polygon(n: usize, p: usize) -> Result<IdealPolygon, GeometryError> {
    let k = n * p;
    if k < 2 {
        return Err(GeometryError::DegenerateInput(format!(
            "np = {k} is too small for an ideal polygon"
        )));
    }
    let vertices = (0..k).map(|v| TAU * v as f64 / k as f64).collect();
    IdealPolygon::from_vertices(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sign_is_stable() {
        let m = MobiusMap::new(
            C64::new(-2.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(-0.5, 0.0),
        )
        .unwrap();
        assert!(m.a.re > 0.0);
        assert!((m.det() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn singular_matrix_rejected() {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        assert_eq!(MobiusMap::new(one, one, one, one), Err(GeometryError::Singular));
        assert_eq!(MobiusMap::new(z, z, z, z), Err(GeometryError::Singular));
    }

    #[test]
    fn point_at_walks_from_theta1_to_theta2() {
        let g = geodesic_between(0.3, 2.0).unwrap();
        assert!((g.point_at(60.0) - cis(2.0)).norm() < 1e-9);
        assert!((g.point_at(-60.0) - cis(0.3)).norm() < 1e-9);
        assert!(g.residual(g.point_at(0.7)) < 1e-12);
    }

    #[test]
    fn ccw_region_of_short_arc_is_inside_circle() {
        let g = geodesic_between(0.0, PI / 2.0).unwrap();
        assert!(g.in_ccw_region(cis(PI / 4.0) * 0.99));
        assert!(!g.in_ccw_region(C64::new(0.0, 0.0)));
        let rev = geodesic_between(PI / 2.0, 0.0).unwrap();
        assert!(rev.in_ccw_region(C64::new(0.0, 0.0)));
    }

    #[test]
    fn arc_helpers() {
        assert!(in_open_arc(0.1, 6.0, 0.5));
        assert!(!in_open_arc(1.0, 6.0, 0.5));
        assert!((angle_diff(0.1, 6.2) - (0.1 + TAU - 6.2)).abs() < 1e-15);
    }
}
