//! The preset groups Γ_{n,p} (Case I) and Γ²_{n,p} (Case II): fundamental polygon,
//! side pairings, rotation symmetry, orbifold signatures and the Poincaré check.

use crate::hyperbolic::{
    common_perpendicular, default_tolerance, geodesic_between, reflect, regular_ideal_polygon,
    cis, Geodesic, GeometryError, IdealPolygon, MobiusMap,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuchsianError {
    #[error("invalid pairing case: {0}")]
    InvalidCase(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("side {side} is not paired correctly (residual {residual:.3e})")]
    PairingViolation { side: usize, residual: f64 },
    #[error("vertex cycle {vertices:?} has non-parabolic transform (|tr²−4| = {defect:.3e})")]
    NonParabolicCycle { vertices: Vec<usize>, defect: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairingCase {
    #[serde(rename = "I")]
    CaseI,
    #[serde(rename = "II")]
    CaseII,
}

impl fmt::Display for PairingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairingCase::CaseI => write!(f, "I"),
            PairingCase::CaseII => write!(f, "II"),
        }
    }
}

impl FromStr for PairingCase {
    type Err = FuchsianError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "I" | "1" | "CaseI" | "i" => Ok(PairingCase::CaseI),
            "II" | "2" | "CaseII" | "ii" => Ok(PairingCase::CaseII),
            other => Err(FuchsianError::InvalidCase(format!("unknown case '{other}'"))),
        }
    }
}

/// First-sector side pairing σ on {1..p}.
pub fn sigma(case: PairingCase, p: usize) -> Vec<usize> {
    (1..=p)
        .map(|s| match case {
            PairingCase::CaseI => p + 1 - s,
            PairingCase::CaseII => {
                let t = (p + 2 - s) % p;
                if t == 0 {
                    p
                } else {
                    t
                }
            }
        })
        .collect()
}

/// Full data of one preset group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupPreset {
    pub n: usize,
    pub p: usize,
    pub case: PairingCase,
    pub polygon: IdealPolygon,
    /// `l` for Case I, `l̃` for Case II.
    pub axis: Geodesic,
    /// g_1..g_p; sector r is obtained by conjugating with the rotation.
    pub first_sector: Vec<MobiusMap>,
    pub rotation: MobiusMap,
    /// σ(s) for s = 1..p, stored at index s−1.
    pub sigma: Vec<usize>,
}

impl GroupPreset {
    pub fn side_count(&self) -> usize {
        self.n * self.p
    }

    /// Global side index of C_{r,s} (1-based r, s).
    pub fn global_side(&self, r: usize, s: usize) -> usize {
        (r - 1) * self.p + (s - 1)
    }

    /// (r, s) of a global side index.
    pub fn sector_side(&self, k: usize) -> (usize, usize) {
        (k / self.p + 1, k % self.p + 1)
    }

    /// Global index of the side paired with global side `k`.
    pub fn paired_side(&self, k: usize) -> usize {
        let (r, s) = self.sector_side(k);
        self.global_side(r, self.sigma[s - 1])
    }

    pub fn side(&self, r: usize, s: usize) -> &Geodesic {
        &self.polygon.sides[self.global_side(r, s)]
    }

    /// Vertex angle `2πv/(np)`.
    pub fn vertex_angle(&self, v: usize) -> f64 {
        TAU * (v % self.side_count()) as f64 / self.side_count() as f64
    }

    /// The generator g_{r,s} = M_ω^{r−1} g_s M_ω^{−(r−1)}.
    pub fn generator(&self, r: usize, s: usize) -> MobiusMap {
        let g = self.first_sector[s - 1];
        if r == 1 {
            return g;
        }
        let rot = self.rotation.pow((r - 1) as i64);
        rot.compose(&g).compose(&rot.inverse())
    }

    pub fn global_generator(&self, k: usize) -> MobiusMap {
        let (r, s) = self.sector_side(k);
        self.generator(r, s)
    }

    /// First-sector sides paired with themselves.
    pub fn self_paired(&self) -> Vec<usize> {
        (1..=self.p).filter(|&s| self.sigma[s - 1] == s).collect()
    }

    /// Display name, e.g. `Γ_{3,1}` or `Γ²_{1,4}`.
    pub fn label(&self) -> String {
        match self.case {
            PairingCase::CaseI => format!("Γ_{{{},{}}}", self.n, self.p),
            PairingCase::CaseII => format!("Γ²_{{{},{}}}", self.n, self.p),
        }
    }
}

/// Build Γ_{n,p} (Case I) or Γ²_{n,p} (Case II).
pub fn build_group(n: usize, p: usize, case: PairingCase) -> Result<GroupPreset, FuchsianError> {
    if n == 0 || p == 0 || n * p < 2 {
        return Err(FuchsianError::DegenerateInput(format!(
            "need n ≥ 1, p ≥ 1 and np ≥ 2 (got n = {n}, p = {p})"
        )));
    }
    if case == PairingCase::CaseII && (p % 2 == 1 || p < 4) {
        return Err(FuchsianError::InvalidCase(format!(
            "Case II needs an even p ≥ 4 (got p = {p})"
        )));
    }
    let polygon = regular_ideal_polygon(n, p)?;
    let axis = match case {
        PairingCase::CaseI => geodesic_between(PI / n as f64, PI / n as f64 + PI)?,
        PairingCase::CaseII => common_perpendicular(&polygon.sides[0], &polygon.sides[p / 2])?,
    };
    let sig = sigma(case, p);
    let first_sector = match case {
        PairingCase::CaseI => {
            let axis_reflection = reflect(&axis);
            (0..p)
                .map(|k| axis_reflection.compose(&reflect(&polygon.sides[k])))
                .collect()
        }
        // Reflecting in l̃ pairs the sides only when n = 1. In general each side is sent
        // to its partner by the reflection in the diameter bisecting the two sides, which
        // coincides with the reflection in l̃ for n = 1.
        PairingCase::CaseII => (0..p)
            .map(|k| {
                let np = (n * p) as f64;
                let mid = |j: usize| TAU * (j as f64 + 0.5) / np;
                let phi = 0.5 * (mid(k) + mid(sig[k] - 1));
                let bisector = geodesic_between(phi, phi + PI)?;
                Ok(reflect(&bisector).compose(&reflect(&polygon.sides[k])))
            })
            .collect::<Result<Vec<_>, FuchsianError>>()?,
    };
    let rotation = if n == 1 {
        MobiusMap::identity()
    } else {
        MobiusMap::rotation(TAU / n as f64)
    };
    Ok(GroupPreset {
        n,
        p,
        case,
        polygon,
        axis,
        first_sector,
        rotation,
        sigma: sig,
    })
}

/// Legal (n, p, case) combinations with n ≤ max_n and p ≤ max_p.
pub fn preset_grid(max_n: usize, max_p: usize) -> Vec<(usize, usize, PairingCase)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for p in 1..=max_p {
            if n * p < 2 {
                continue;
            }
            out.push((n, p, PairingCase::CaseI));
            if p % 2 == 0 && p >= 4 {
                out.push((n, p, PairingCase::CaseII));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidePairingEntry {
    pub r: usize,
    pub s: usize,
    pub paired_with: (usize, usize),
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidePairingReport {
    pub entries: Vec<SidePairingEntry>,
    pub max_residual: f64,
}

/// Check that every generator carries its side onto the paired side, reversing endpoints.
pub fn side_pairing_check(g: &GroupPreset) -> Result<SidePairingReport, FuchsianError> {
    let np = g.side_count();
    let mut entries = Vec::with_capacity(np);
    let mut max_residual: f64 = 0.0;
    for k in 0..np {
        let m = g.global_generator(k);
        let j = g.paired_side(k);
        let start = cis(g.vertex_angle(k));
        let end = cis(g.vertex_angle(k + 1));
        let residual = (m.apply(start) - cis(g.vertex_angle(j + 1)))
            .norm()
            .max((m.apply(end) - cis(g.vertex_angle(j))).norm());
        max_residual = max_residual.max(residual);
        let (r, s) = g.sector_side(k);
        entries.push(SidePairingEntry {
            r,
            s,
            paired_with: g.sector_side(j),
            residual,
        });
        if !(residual < 1e-8) {
            return Err(FuchsianError::PairingViolation { side: k, residual });
        }
    }
    Ok(SidePairingReport {
        entries,
        max_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleKind {
    Parabolic,
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexCycle {
    /// Vertices in the order visited.
    pub vertices: Vec<usize>,
    /// Global sides crossed, one per vertex.
    pub sides: Vec<usize>,
    pub transform: MobiusMap,
    /// |tr² − 4| of the cycle transformation.
    pub defect: f64,
    pub kind: CycleKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub cycles: Vec<VertexCycle>,
    /// (s, |trace|) for each self-paired first-sector generator.
    pub order_two: Vec<(usize, f64)>,
    pub rotation_order: usize,
}

/// Ideal-vertex cycles of Π under the side pairings, traced combinatorially.
/// Returns the cycles as (vertices, sides) lists.
pub fn vertex_cycles(g: &GroupPreset) -> Vec<(Vec<usize>, Vec<usize>)> {
    let np = g.side_count();
    let mut seen = vec![false; np];
    let mut out = Vec::new();
    for v0 in 0..np {
        if seen[v0] {
            continue;
        }
        let mut vertices = Vec::new();
        let mut sides = Vec::new();
        let mut v = v0;
        loop {
            seen[v] = true;
            vertices.push(v);
            // Side v starts at v; its generator sends v to the end of the paired side.
            sides.push(v);
            v = (g.paired_side(v) + 1) % np;
            if v == v0 {
                break;
            }
        }
        out.push((vertices, sides));
    }
    out
}

fn order_of(m: &MobiusMap, max: usize, tol: f64) -> Option<usize> {
    let mut acc = *m;
    for k in 1..=max {
        if acc.is_identity(tol) {
            return Some(k);
        }
        acc = acc.compose(m);
    }
    None
}

/// Poincaré polygon check: parabolic cycle transforms, order-2 traces, rotation order.
pub fn poincare_check(g: &GroupPreset) -> Result<CycleReport, FuchsianError> {
    let tol = default_tolerance();
    let mut cycles = Vec::new();
    for (vertices, sides) in vertex_cycles(g) {
        let mut transform = MobiusMap::identity();
        for &k in &sides {
            transform = g.global_generator(k).compose(&transform);
        }
        let tr = transform.trace();
        let defect = (tr * tr - 4.0).norm();
        let kind = if transform.is_identity(tol) {
            CycleKind::Identity
        } else if defect < 1e-7 {
            CycleKind::Parabolic
        } else {
            return Err(FuchsianError::NonParabolicCycle { vertices, defect });
        };
        cycles.push(VertexCycle {
            vertices,
            sides,
            transform,
            defect,
            kind,
        });
    }
    let mut order_two = Vec::new();
    for s in g.self_paired() {
        let t = g.first_sector[s - 1].trace().norm();
        // Degenerate np = 2 presets may have the identity as a "generator".
        if g.first_sector[s - 1].is_identity(tol) {
            continue;
        }
        if t >= 1e-9 {
            return Err(FuchsianError::DegenerateInput(format!(
                "self-paired generator g_{s} has trace {t:.3e}, expected 0"
            )));
        }
        order_two.push((s, t));
    }
    let rotation_order = order_of(&g.rotation, g.n, tol).ok_or_else(|| {
        FuchsianError::DegenerateInput("rotation does not have finite order n".into())
    })?;
    if rotation_order != g.n {
        return Err(FuchsianError::DegenerateInput(format!(
            "rotation has order {rotation_order}, expected {}",
            g.n
        )));
    }
    Ok(CycleReport {
        cycles,
        order_two,
        rotation_order,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbifoldSignature {
    pub genus: usize,
    pub punctures: usize,
    /// Cone-point orders, sorted ascending.
    pub cone_points: Vec<usize>,
}

impl OrbifoldSignature {
    pub fn order_two_count(&self) -> usize {
        self.cone_points.iter().filter(|&&c| c == 2).count()
    }
}

/// Signature of 𝔻/Γ̂ (`extended`) or 𝔻/Γ, counted from the side-pairing combinatorics.
///
/// For n = 2 the rotation contributes a cone point of order 2 to the extended quotient.
pub fn orbifold_signature(g: &GroupPreset, extended: bool) -> OrbifoldSignature {
    let np = g.side_count();
    let cycles = vertex_cycles(g);
    let fixed = g.self_paired().len();
    let (punctures, mut cone_points, edges) = if extended && g.n > 1 {
        // Rotation orbits of vertex cycles, via their minimal vertex mod p.
        let mut classes: Vec<usize> = cycles
            .iter()
            .map(|(vs, _)| vs.iter().map(|v| v % g.p).min().unwrap_or(0))
            .collect();
        classes.sort_unstable();
        classes.dedup();
        let mut cones = vec![2; fixed];
        cones.push(g.n);
        let side_edges = (g.p - fixed) / 2 + fixed;
        (classes.len(), cones, side_edges + 1)
    } else {
        let total_fixed = fixed * g.n;
        let side_edges = (np - total_fixed) / 2 + total_fixed;
        (cycles.len(), vec![2; total_fixed], side_edges)
    };
    // Euler characteristic of the quotient cell structure: one face.
    let chi = (punctures + cone_points.len()) as i64 - edges as i64 + 1;
    let genus = ((2 - chi) / 2).max(0) as usize;
    cone_points.sort_unstable();
    OrbifoldSignature {
        genus,
        punctures,
        cone_points,
    }
}

/// Closed-form signature of 𝔻/Γ̂ for the presets (order-n point reported for every n ≥ 2).
pub fn orbifold_signature_formula(n: usize, p: usize, case: PairingCase) -> OrbifoldSignature {
    let (punctures, mut cones) = match case {
        PairingCase::CaseI => (p / 2 + 1, if p % 2 == 1 { vec![2] } else { vec![] }),
        PairingCase::CaseII => (p / 2, vec![2, 2]),
    };
    if n >= 2 {
        cones.push(n);
    }
    cones.sort_unstable();
    OrbifoldSignature {
        genus: 0,
        punctures,
        cone_points: cones,
    }
}

/// Degree bookkeeping for a critically fixed polynomial with prescribed finite
/// critical multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreePlan {
    pub multiplicities: Vec<usize>,
    pub degree: usize,
    pub top_multiplicity: usize,
}

impl DegreePlan {
    /// The realizability inequalities for the multiplicity list extended by the top one.
    pub fn satisfies_realizability(&self) -> bool {
        let d = self.degree;
        let all: Vec<usize> = self
            .multiplicities
            .iter()
            .copied()
            .chain(std::iter::once(self.top_multiplicity))
            .collect();
        all.iter().all(|&m| m >= 1 && m <= d - 1)
            && all.iter().sum::<usize>() == 2 * d - 2
            && all.len() <= d
    }
}

pub fn degree_plan(multiplicities: &[usize]) -> Result<DegreePlan, FuchsianError> {
    if multiplicities.is_empty() || multiplicities.contains(&0) {
        return Err(FuchsianError::DegenerateInput(
            "multiplicities must be a nonempty list of positive integers".into(),
        ));
    }
    let top: usize = multiplicities.iter().sum();
    let plan = DegreePlan {
        multiplicities: multiplicities.to_vec(),
        degree: top + 1,
        top_multiplicity: top,
    };
    debug_assert!(plan.satisfies_realizability());
    Ok(plan)
}
