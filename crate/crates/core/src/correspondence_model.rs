//! Desk-scale model of the correspondence on a tiling-set component: the p-component
//! model 𝔻 × {1..p} with R̃(w, j) = wⁿ, its deck automorphism τ̃, the involution η at
//! the level of generators, branch words, representation recovery, tilings of Π̂, and
//! hyperbolic Blaschke products.

use crate::bowen_series::{format_word, push_letter, word_element, Letter};
use crate::fuchsian::{build_group, orbifold_signature, GroupPreset, PairingCase};
use crate::hyperbolic::{cis, MobiusMap};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorrespondenceError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("point {0} is outside the unit disk")]
    OutsideDisk(C64),
    #[error("relation orders {found:?} do not match the orbifold cone orders {expected:?}")]
    RelationMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    #[error("{count} overlapping tile pairs")]
    OverlapDetected { count: usize },
    #[error("word length {0} exceeds the limit of {MAX_WORD_LENGTH}")]
    LengthLimit(usize),
    #[error("zero {0} is not inside the unit disk")]
    ZeroOutsideDisk(C64),
    #[error("no attracting interior fixed point (multiplier modulus {multiplier})")]
    NotHyperbolic { multiplier: f64 },
}

pub const MAX_WORD_LENGTH: usize = 8;

/// A point (w, j) of 𝔻 × {1..p}; j is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint {
    pub w: C64,
    pub j: usize,
}

impl ModelPoint {
    pub fn new(w: C64, j: usize) -> Self {
        ModelPoint { w, j }
    }

    pub fn distance(&self, other: &ModelPoint) -> f64 {
        if self.j != other.j {
            f64::INFINITY
        } else {
            (self.w - other.w).norm()
        }
    }
}

/// Model of one tiling-set component family for a group slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelTilingSet {
    pub n: usize,
    pub p: usize,
    pub case: PairingCase,
    /// σ(j) for j = 1..p, at index j − 1.
    pub sigma: Vec<usize>,
    /// k_j ∈ [1, np] with τ^{k_j}∘η stabilizing component j.
    pub k_exponents: Vec<usize>,
    pub preset: GroupPreset,
}

impl ModelTilingSet {
    pub fn new(n: usize, p: usize, case: PairingCase) -> Result<Self, CorrespondenceError> {
        let preset =
            build_group(n, p, case).map_err(|e| CorrespondenceError::InvalidModel(e.to_string()))?;
        let np = n * p;
        let sigma = preset.sigma.clone();
        // η carries component j to σ(j) without wrapping, so τ^{k}∘η returns to j
        // exactly when k ≡ j − σ(j) (mod np).
        let k_exponents = (1..=p)
            .map(|j| {
                let k = (j as i64 - sigma[j - 1] as i64).rem_euclid(np as i64) as usize;
                if k == 0 {
                    np
                } else {
                    k
                }
            })
            .collect();
        Ok(ModelTilingSet {
            n,
            p,
            case,
            sigma,
            k_exponents,
            preset,
        })
    }

    pub fn np(&self) -> usize {
        self.n * self.p
    }

    fn omega(&self) -> C64 {
        cis(TAU / self.n as f64)
    }

    /// R̃(w, j) = wⁿ.
    pub fn r_model(&self, z: ModelPoint) -> C64 {
        z.w.powu(self.n as u32)
    }

    /// τ̃: (w, j) ↦ (w, j+1) for j < p, (w, p) ↦ (ωw, 1).
    pub fn tau(&self, z: ModelPoint) -> ModelPoint {
        if z.j < self.p {
            ModelPoint::new(z.w, z.j + 1)
        } else {
            ModelPoint::new(self.omega() * z.w, 1)
        }
    }

    pub fn tau_inverse(&self, z: ModelPoint) -> ModelPoint {
        if z.j > 1 {
            ModelPoint::new(z.w, z.j - 1)
        } else {
            ModelPoint::new(self.omega().conj() * z.w, self.p)
        }
    }

    pub fn tau_pow(&self, z: ModelPoint, k: i64) -> ModelPoint {
        let k = k.rem_euclid(self.np() as i64);
        (0..k).fold(z, |acc, _| self.tau(acc))
    }

    /// η on component j, read off from f_j = τ^{k_j}∘η acting on component j as the
    /// generator g_j in component coordinates.
    pub fn eta(&self, z: ModelPoint) -> ModelPoint {
        let g = &self.preset.first_sector[z.j - 1];
        let f = ModelPoint::new(g.apply(z.w), z.j);
        self.tau_pow(f, -(self.k_exponents[z.j - 1] as i64))
    }

    pub fn eval(&self, word: &ModelWord, z: ModelPoint) -> ModelPoint {
        word.0.iter().rev().fold(z, |acc, l| match l {
            ModelLetter::Eta => self.eta(acc),
            ModelLetter::Tau(k) => self.tau_pow(acc, *k),
        })
    }
}

/// Full R̃-fiber through a point as its τ̃-orbit, ordered by τ-power; p points when w = 0.
pub fn fiber(m: &ModelTilingSet, z: ModelPoint) -> Result<Vec<ModelPoint>, CorrespondenceError> {
    if z.w.norm() >= 1.0 {
        return Err(CorrespondenceError::OutsideDisk(z.w));
    }
    if z.j == 0 || z.j > m.p {
        return Err(CorrespondenceError::InvalidModel(format!(
            "component {} not in 1..{}",
            z.j, m.p
        )));
    }
    let mut out: Vec<ModelPoint> = Vec::with_capacity(m.np());
    let mut cur = z;
    for _ in 0..m.np() {
        if !out.iter().any(|q| q.distance(&cur) < 1e-15) {
            out.push(cur);
        }
        cur = m.tau(cur);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelLetter {
    Eta,
    Tau(i64),
}

/// A word in η and τ, composed right to left.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelWord(pub Vec<ModelLetter>);

impl ModelWord {
    pub fn tau(k: i64) -> Self {
        ModelWord(vec![ModelLetter::Tau(k)])
    }

    pub fn eta() -> Self {
        ModelWord(vec![ModelLetter::Eta])
    }

    /// self ∘ other, with τ powers merged mod np and η∘η cancelled.
    pub fn then_after(&self, other: &ModelWord, np: usize) -> ModelWord {
        let mut out: Vec<ModelLetter> = Vec::new();
        for &l in self.0.iter().chain(other.0.iter()) {
            match (out.last().copied(), l) {
                (Some(ModelLetter::Tau(a)), ModelLetter::Tau(b)) => {
                    out.pop();
                    let k = (a + b).rem_euclid(np as i64);
                    if k != 0 {
                        out.push(ModelLetter::Tau(k));
                    }
                }
                (Some(ModelLetter::Eta), ModelLetter::Eta) => {
                    out.pop();
                }
                (_, ModelLetter::Tau(b)) if b.rem_euclid(np as i64) == 0 => {}
                (_, ModelLetter::Tau(b)) => out.push(ModelLetter::Tau(b.rem_euclid(np as i64))),
                (_, l) => out.push(l),
            }
        }
        ModelWord(out)
    }

    pub fn inverse(&self, np: usize) -> ModelWord {
        let letters = self
            .0
            .iter()
            .rev()
            .map(|l| match l {
                ModelLetter::Eta => ModelLetter::Eta,
                ModelLetter::Tau(k) => ModelLetter::Tau(-k),
            })
            .collect::<Vec<_>>();
        ModelWord(vec![]).then_after(&ModelWord(letters), np)
    }
}

impl fmt::Display for ModelWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| match l {
                ModelLetter::Eta => "η".to_string(),
                ModelLetter::Tau(1) => "τ".to_string(),
                ModelLetter::Tau(k) => format!("τ^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join("∘"))
    }
}

/// Sample points spread over the model, deterministic.
pub fn model_samples(m: &ModelTilingSet, count: usize) -> Vec<ModelPoint> {
    (0..count)
        .map(|i| {
            let t = i as f64 + 0.5;
            let r = 0.85 * ((t * 0.618_033_988_75).fract()).sqrt();
            ModelPoint::new(C64::from_polar(r, TAU * (t * 0.754_877_666).fract()), 1 + i % m.p)
        })
        .collect()
}

fn words_agree(m: &ModelTilingSet, a: &ModelWord, b: &ModelWord, samples: &[ModelPoint]) -> f64 {
    samples
        .iter()
        .map(|&z| m.eval(a, z).distance(&m.eval(b, z)))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub branches: Vec<ModelWord>,
    pub labels: Vec<String>,
    /// sup over samples of the distance between τ and (τ²∘η)∘(τ∘η)⁻¹.
    pub generating_residual: f64,
    /// sup over samples of |η(η(z)) − z|.
    pub involution_residual: f64,
}

/// The np − 1 forward branches τ^k∘η and the generating-set identity.
pub fn branch_words(m: &ModelTilingSet) -> BranchReport {
    let np = m.np();
    let branches: Vec<ModelWord> = (1..np as i64)
        .map(|k| ModelWord::tau(k).then_after(&ModelWord::eta(), np))
        .collect();
    let samples = model_samples(m, 100);
    let t_eta = ModelWord::tau(1).then_after(&ModelWord::eta(), np);
    let t2_eta = ModelWord::tau(2).then_after(&ModelWord::eta(), np);
    let rebuilt = t2_eta.then_after(&t_eta.inverse(np), np);
    // Evaluate the unreduced composition so the check is not settled symbolically.
    let generating_residual = samples
        .iter()
        .map(|&z| {
            // (τ∘η)⁻¹ = η∘τ⁻¹.
            let inv = m.eta(m.tau_inverse(z));
            let lhs = m.tau_pow(m.eta(inv), 2);
            lhs.distance(&m.tau(z))
        })
        .fold(0.0, f64::max)
        .max(words_agree(m, &rebuilt, &ModelWord::tau(1), &samples));
    let involution_residual = samples
        .iter()
        .map(|&z| m.eta(m.eta(z)).distance(&z))
        .fold(0.0, f64::max);
    BranchReport {
        labels: branches.iter().map(|w| w.to_string()).collect(),
        branches,
        generating_residual,
        involution_residual,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveredGenerator {
    pub j: usize,
    pub k: usize,
    pub word: ModelWord,
    pub label: String,
    /// Finite order in the model, if ≤ the search bound.
    pub order: Option<usize>,
    pub stabilizes_component_one: bool,
    /// sup distance to g_j acting on component 1.
    pub generator_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recovery {
    pub generators: Vec<RecoveredGenerator>,
    pub rotation: ModelWord,
    pub rotation_order: usize,
    /// Finite orders > 1 among the recovered words, sorted.
    pub relation_orders: Vec<usize>,
    /// Cone orders of the orbifold signature of 𝔻/Γ̂.
    pub cone_orders: Vec<usize>,
}

const ORDER_BOUND: usize = 24;

fn order_of(m: &ModelTilingSet, w: &ModelWord, samples: &[ModelPoint]) -> Option<usize> {
    let mut pts = samples.to_vec();
    for k in 1..=ORDER_BOUND {
        pts = pts.iter().map(|&z| m.eval(w, z)).collect();
        if pts.iter().zip(samples).all(|(a, b)| a.distance(b) < 1e-9) {
            return Some(k);
        }
    }
    None
}

/// The table j ↦ τ^{−(j−1)}∘(τ^{k_j}∘η)∘τ^{j−1} together with τ^p, and a check that the
/// finite relation orders equal the cone orders of 𝔻/Γ̂.
pub fn recover_representation(m: &ModelTilingSet) -> Result<Recovery, CorrespondenceError> {
    let np = m.np();
    let samples: Vec<ModelPoint> = model_samples(m, 24)
        .into_iter()
        .map(|z| ModelPoint::new(z.w, 1))
        .collect();
    let mut generators = Vec::new();
    for j in 1..=m.p {
        let k = m.k_exponents[j - 1];
        let shift = (j - 1) as i64;
        let word = ModelWord::tau(-shift)
            .then_after(&ModelWord::tau(k as i64), np)
            .then_after(&ModelWord::eta(), np)
            .then_after(&ModelWord::tau(shift), np);
        let g = &m.preset.first_sector[j - 1];
        let mut stabilizes = true;
        let mut residual: f64 = 0.0;
        for &z in &samples {
            let img = m.eval(&word, z);
            stabilizes &= img.j == 1;
            residual = residual.max((img.w - g.apply(z.w)).norm());
        }
        generators.push(RecoveredGenerator {
            j,
            k,
            label: word.to_string(),
            order: order_of(m, &word, &samples),
            word,
            stabilizes_component_one: stabilizes,
            generator_residual: residual,
        });
    }
    let rotation = ModelWord::tau(m.p as i64).then_after(&ModelWord(vec![]), np);
    let rotation_order = order_of(m, &rotation, &samples).unwrap_or(0);
    let mut relation_orders: Vec<usize> = generators
        .iter()
        .filter_map(|g| g.order)
        .chain(std::iter::once(rotation_order))
        .filter(|&o| o > 1)
        .collect();
    relation_orders.sort_unstable();
    let mut cone_orders = orbifold_signature(&m.preset, m.n > 1).cone_points;
    cone_orders.sort_unstable();
    if relation_orders != cone_orders {
        return Err(CorrespondenceError::RelationMismatch {
            expected: cone_orders,
            found: relation_orders,
        });
    }
    Ok(Recovery {
        generators,
        rotation,
        rotation_order,
        relation_orders,
        cone_orders,
    })
}

/// The fundamental domain Π̂ of Γ̂: Π itself for n = 1, else the part of Π in the
/// sector 0 < arg z < 2π/n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalDomain {
    pub preset: GroupPreset,
    /// Vertices in order; the center comes first when n ≥ 2.
    pub vertices: Vec<C64>,
    /// Per side, the map sending the side to the real diameter with Π above it.
    normalizers: Vec<MobiusMap>,
}

impl FundamentalDomain {
    pub fn new(preset: &GroupPreset) -> Self {
        let n = preset.n;
        let p = preset.p;
        let vertices = if n == 1 {
            (0..p).map(|v| cis(preset.vertex_angle(v))).collect()
        } else {
            std::iter::once(C64::new(0.0, 0.0))
                .chain((0..=p).map(|v| cis(preset.vertex_angle(v))))
                .collect()
        };
        let normalizers = preset
            .polygon
            .sides
            .iter()
            .map(|s| s.from_diameter_map().inverse())
            .collect();
        FundamentalDomain {
            preset: preset.clone(),
            vertices,
            normalizers,
        }
    }

    fn sector_width(&self) -> f64 {
        TAU / self.preset.n as f64
    }

    /// Strict interior test with a margin.
    pub fn contains(&self, z: C64, margin: f64) -> bool {
        if z.norm() >= 1.0 - margin {
            return false;
        }
        if self.preset.n > 1 {
            let r = z.norm();
            if r < margin {
                return false;
            }
            let a = z.arg().rem_euclid(TAU);
            let angular = margin / r;
            if a <= angular || a >= self.sector_width() - angular {
                return false;
            }
        }
        // Same sign convention as `Geodesic::ccw_region_signed`, which is −Im.
        self.normalizers.iter().all(|m| m.apply(z).im > margin)
    }

    /// `count` interior points on rays through the domain, deterministic.
    pub fn interior_samples(&self, count: usize) -> Vec<C64> {
        let rays = (count as f64).sqrt().ceil() as usize;
        let per_ray = count.div_ceil(rays);
        let mut out = Vec::with_capacity(count);
        for i in 0..rays {
            let theta = self.sector_width() * (i as f64 + 0.5) / rays as f64;
            let dir = cis(theta);
            // Boundary distance along the ray by bisection.
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if self.contains(dir * mid, 0.0) || mid < 1e-12 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            for k in 0..per_ray {
                if out.len() == count {
                    break;
                }
                let t = (k as f64 + 0.5) / per_ray as f64;
                out.push(dir * (lo * (0.1 + 0.85 * t)));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelTile {
    pub word: String,
    pub letters: Vec<Letter>,
    pub element: MobiusMap,
    pub vertices: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TilingReport {
    pub label: String,
    pub max_word_length: usize,
    pub samples_per_tile: usize,
    pub tiles: Vec<ModelTile>,
    pub overlaps: usize,
}

pub const TILE_SAMPLES: usize = 20;

fn inverse_letter(preset: &GroupPreset, l: Letter) -> Letter {
    match l {
        Letter::Gen(s) => Letter::Gen(preset.sigma[s - 1]),
        Letter::Rot(e) => Letter::Rot(preset.n - e),
    }
}

/// Images γ(Π̂) for reduced words of length ≤ `max_word_length` in the generators
/// g_1..g_p and M_ω of Γ̂, with a sampled pairwise interior-disjointness check.
pub fn group_tiling(
    preset: &GroupPreset,
    max_word_length: usize,
) -> Result<TilingReport, CorrespondenceError> {
    if max_word_length > MAX_WORD_LENGTH {
        return Err(CorrespondenceError::LengthLimit(max_word_length));
    }
    if preset.side_count() < 3 {
        return Err(CorrespondenceError::InvalidModel(
            "Π is degenerate for np < 3".into(),
        ));
    }
    let domain = FundamentalDomain::new(preset);
    let samples = domain.interior_samples(TILE_SAMPLES);
    let probe = samples[samples.len() / 2];
    let mut alphabet: Vec<Letter> = (1..=preset.p).map(Letter::Gen).collect();
    alphabet.extend((1..preset.n).map(Letter::Rot));

    let mut tiles: Vec<ModelTile> = Vec::new();
    let mut probes: Vec<C64> = Vec::new();
    let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut add = |letters: &Vec<Letter>, tiles: &mut Vec<ModelTile>| -> bool {
        let element = word_element(preset, letters);
        let image = element.apply(probe);
        if probes.iter().any(|q| (q - image).norm() < 1e-10) {
            return false;
        }
        probes.push(image);
        tiles.push(ModelTile {
            word: format_word(letters),
            letters: letters.clone(),
            vertices: domain.vertices.iter().map(|&v| element.apply(v)).collect(),
            element,
        });
        true
    };
    add(&Vec::new(), &mut tiles);
    for _ in 0..max_word_length {
        let mut next = Vec::new();
        for word in &frontier {
            for &l in &alphabet {
                if let Some(&last) = word.last() {
                    let rot_after_rot = matches!((last, l), (Letter::Rot(_), Letter::Rot(_)));
                    if rot_after_rot || inverse_letter(preset, last) == l {
                        continue;
                    }
                }
                let mut w = word.clone();
                push_letter(&mut w, l, preset.n);
                if add(&w, &mut tiles) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }

    let overlaps = tile_overlaps(&domain, &tiles, &samples);
    if overlaps > 0 {
        return Err(CorrespondenceError::OverlapDetected { count: overlaps });
    }
    Ok(TilingReport {
        label: preset.label(),
        max_word_length,
        samples_per_tile: samples.len(),
        tiles,
        overlaps,
    })
}

/// Ordered pairs (a, b), a ≠ b, where a sample of tile a lies inside tile b.
pub fn tile_overlaps(domain: &FundamentalDomain, tiles: &[ModelTile], samples: &[C64]) -> usize {
    let inverses: Vec<MobiusMap> = tiles.iter().map(|t| t.element.inverse()).collect();
    let mut overlaps = 0;
    for (a, ta) in tiles.iter().enumerate() {
        let pts: Vec<C64> = samples.iter().map(|&x| ta.element.apply(x)).collect();
        for (b, inv) in inverses.iter().enumerate() {
            if a != b && pts.iter().any(|&y| domain.contains(inv.apply(y), 1e-9)) {
                overlaps += 1;
            }
        }
    }
    overlaps
}

/// B(z) = e^{iθ} ∏ (z − a_k)/(1 − ā_k z) with all zeros in 𝔻 and an attracting fixed
/// point in 𝔻.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    pub zeros: Vec<C64>,
    pub rotation: C64,
    pub fixed_point: C64,
    pub multiplier: f64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<C64>, rotation_angle: f64) -> Result<Self, CorrespondenceError> {
        if zeros.is_empty() {
            return Err(CorrespondenceError::InvalidModel(
                "a Blaschke product needs at least one zero".into(),
            ));
        }
        if let Some(&a) = zeros.iter().find(|a| a.norm() >= 1.0) {
            return Err(CorrespondenceError::ZeroOutsideDisk(a));
        }
        let mut b = BlaschkeProduct {
            zeros,
            rotation: cis(rotation_angle),
            fixed_point: C64::new(0.0, 0.0),
            multiplier: 0.0,
        };
        // Iterate from 0; for a hyperbolic product this converges to the fixed point.
        let mut z = C64::new(0.0, 0.0);
        for _ in 0..10_000 {
            let next = b.eval(z);
            let step = (next - z).norm();
            z = next;
            if step < 1e-15 {
                break;
            }
        }
        let multiplier = b.derivative(z).norm();
        if (b.eval(z) - z).norm() > 1e-12 || z.norm() >= 1.0 - 1e-9 || multiplier >= 1.0 {
            return Err(CorrespondenceError::NotHyperbolic { multiplier });
        }
        b.fixed_point = z;
        b.multiplier = multiplier;
        Ok(b)
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.zeros
            .iter()
            .fold(self.rotation, |acc, &a| acc * (z - a) / (1.0 - a.conj() * z))
    }

    /// Product rule over the factors, safe at the zeros.
    pub fn derivative(&self, z: C64) -> C64 {
        let factors: Vec<C64> = self
            .zeros
            .iter()
            .map(|&a| (z - a) / (1.0 - a.conj() * z))
            .collect();
        let mut total = C64::new(0.0, 0.0);
        for (k, &a) in self.zeros.iter().enumerate() {
            let d = (1.0 - a.norm_sqr()) / (1.0 - a.conj() * z).powu(2);
            let rest: C64 = factors
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .map(|(_, f)| *f)
                .product();
            total += d * rest;
        }
        self.rotation * total
    }

    /// Winding number of B around 0 along the unit circle, from `samples` points.
    pub fn circle_winding(&self, samples: usize) -> i64 {
        let mut total = 0.0;
        let mut prev = self.eval(C64::new(1.0, 0.0)).arg();
        for i in 1..=samples {
            let cur = self.eval(cis(TAU * i as f64 / samples as f64)).arg();
            let mut d = cur - prev;
            d -= TAU * (d / TAU).round();
            total += d;
            prev = cur;
        }
        (total / TAU).round() as i64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeOrbit {
    pub points: Vec<C64>,
    pub converged: bool,
    /// First iterate within 1e−12 of the attracting fixed point.
    pub steps_to_converge: Option<usize>,
    pub fixed_point: C64,
}

/// Iterate B from `z`; in model coordinates this is the forward branch on the
/// Blaschke basin.
pub fn blaschke_branch(
    b: &BlaschkeProduct,
    z: C64,
    iterations: usize,
) -> Result<BlaschkeOrbit, CorrespondenceError> {
    if z.norm() > 1.0 + 1e-12 {
        return Err(CorrespondenceError::OutsideDisk(z));
    }
    let mut points = vec![z];
    let mut cur = z;
    let mut steps = None;
    for i in 0..iterations {
        if steps.is_none() && (cur - b.fixed_point).norm() < 1e-12 {
            steps = Some(i);
        }
        cur = b.eval(cur);
        points.push(cur);
    }
    if steps.is_none() && (cur - b.fixed_point).norm() < 1e-12 {
        steps = Some(iterations);
    }
    Ok(BlaschkeOrbit {
        points,
        converged: steps.is_some(),
        steps_to_converge: steps,
        fixed_point: b.fixed_point,
    })
}
