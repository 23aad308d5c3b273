//! Bowen-Series maps A^BS and their factors A^fBS under z ↦ zⁿ: evaluation, covering
//! degree, Markov partition, the conjugacy with z^d, and dynamical tiles.

use crate::fuchsian::{GroupPreset, PairingCase};
use crate::hyperbolic::{
    ccw_distance, cis, wrap_angle, Geodesic, IdealPolygon, MobiusMap, ANGLE_EPS, C64,
};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::f64::consts::TAU;
use thiserror::Error;

/// Largest tile rank accepted by [`tiles`].
pub const MAX_RANK: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BowenSeriesError {
    #[error("the factor map needs n ≥ 2 (got n = {0})")]
    FactorNeedsRotation(usize),
    #[error("angle {0} is a breakpoint; use one-sided limits")]
    AtBreakpoint(f64),
    #[error("point lies in the interior of the fundamental polygon")]
    OutsideDomain,
    #[error("preimage counts disagree: {0:?}")]
    InconsistentDegree(Vec<usize>),
    #[error("Markov property fails at arc {arc} (endpoint residual {residual:.3e})")]
    MarkovViolation { arc: usize, residual: f64 },
    #[error("depth {depth} gives arc width {width:.3e}, wider than requested")]
    DepthTooSmall { depth: usize, width: f64 },
    #[error("the unfactored map for n ≥ 2 is discontinuous; use the factor map for the conjugacy")]
    Discontinuous,
    #[error("tile rank {0} exceeds the limit {MAX_RANK}")]
    RankLimit(usize),
}

/// One pocket: the half-plane cut off by a side of Π, with its generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PocketEntry {
    pub r: usize,
    pub s: usize,
    /// Global side index (r−1)p + (s−1).
    pub side: usize,
    pub geodesic: Geodesic,
    pub map: MobiusMap,
    /// Subtended boundary arc, in the map's own circle coordinate.
    pub arc: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PocketTable {
    pub entries: Vec<PocketEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BowenSeriesMap {
    pub preset: GroupPreset,
    pub pockets: PocketTable,
    /// True for the factor map under z ↦ zⁿ.
    pub factor: bool,
    /// Normalization point of the conjugacy with z^d.
    pub marked_fixed_angle: f64,
}

impl BowenSeriesMap {
    pub fn new(preset: GroupPreset, factor: bool) -> Result<Self, BowenSeriesError> {
        if factor && preset.n < 2 {
            return Err(BowenSeriesError::FactorNeedsRotation(preset.n));
        }
        let np = preset.side_count();
        let count = if factor { preset.p } else { np };
        let entries = (0..count)
            .map(|k| {
                let (r, s) = preset.sector_side(k);
                let arc = if factor {
                    (
                        TAU * (s - 1) as f64 / preset.p as f64,
                        wrap_angle(TAU * s as f64 / preset.p as f64),
                    )
                } else {
                    (preset.vertex_angle(k), preset.vertex_angle(k + 1))
                };
                PocketEntry {
                    r,
                    s,
                    side: k,
                    geodesic: preset.polygon.sides[k],
                    map: preset.global_generator(k),
                    arc,
                }
            })
            .collect();
        let mut m = BowenSeriesMap {
            preset,
            pockets: PocketTable { entries },
            factor,
            marked_fixed_angle: 0.0,
        };
        m.marked_fixed_angle = m.compute_marked_angle();
        Ok(m)
    }

    /// Expected covering degree np − 1.
    pub fn expected_degree(&self) -> usize {
        self.preset.side_count() - 1
    }

    fn n(&self) -> usize {
        self.preset.n
    }

    /// Continuous on the circle: n = 1, or the factor map.
    pub fn is_continuous(&self) -> bool {
        self.factor || self.preset.n == 1
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.pockets.entries.iter().map(|e| e.arc.0).collect()
    }

    fn arc_len(&self) -> f64 {
        TAU / self.pockets.entries.len() as f64
    }

    /// Index of the pocket whose half-open arc [start, end) contains `theta`.
    fn pocket_index(&self, theta: f64) -> usize {
        let t = wrap_angle(theta);
        let k = (t / self.arc_len()).floor() as usize;
        k.min(self.pockets.entries.len() - 1)
    }

    fn near_breakpoint(&self, theta: f64) -> bool {
        let t = wrap_angle(theta);
        let x = t / self.arc_len();
        let frac = (x - x.round()).abs() * self.arc_len();
        frac < ANGLE_EPS
    }

    /// Apply pocket `k`'s branch at `theta` (in the map's coordinate), lifting through
    /// sector `lift` for the factor map.
    fn apply_branch(&self, k: usize, theta: f64, lift: usize) -> f64 {
        let e = &self.pockets.entries[k];
        if !self.factor {
            return e.map.apply_angle(theta);
        }
        let n = self.n() as f64;
        if lift == 0 {
            return wrap_angle(n * e.map.apply(cis(theta / n)).arg());
        }
        let rot = self.preset.rotation.pow(lift as i64);
        let g = rot.compose(&e.map).compose(&rot.inverse());
        let z = cis(theta / n + TAU * lift as f64 / n);
        wrap_angle(n * g.apply(z).arg())
    }

    /// Evaluate using the pocket to the right of `theta`, so breakpoints are allowed.
    pub fn eval_right(&self, theta: f64) -> f64 {
        let k = self.pocket_index(theta);
        self.apply_branch(k, theta, 0)
    }

    /// Evaluate using the pocket to the left of `theta`.
    pub fn eval_left(&self, theta: f64) -> f64 {
        let t = wrap_angle(theta);
        let len = self.arc_len();
        let x = t / len;
        let k = if (x - x.round()).abs() * len < ANGLE_EPS {
            (x.round() as usize + self.pockets.entries.len() - 1) % self.pockets.entries.len()
        } else {
            self.pocket_index(t)
        };
        self.apply_branch(k, t, 0)
    }

    /// All preimages of `psi` on the circle, sorted by angle.
    pub fn preimages(&self, psi: f64) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        let lifts = if self.factor { self.n() } else { 1 };
        let n = self.n() as f64;
        for e in &self.pockets.entries {
            let inv = e.map.inverse();
            let (lo, hi) = if self.factor {
                (e.arc.0 / n, e.arc.0 / n + self.arc_len() / n)
            } else {
                (e.arc.0, e.arc.0 + self.arc_len())
            };
            for j in 0..lifts {
                let target = if self.factor {
                    cis((psi + TAU * j as f64) / n)
                } else {
                    cis(psi)
                };
                let z = inv.apply(target);
                let off = ccw_distance(lo, z.arg());
                let off = if off > TAU - 1e-11 { off - TAU } else { off };
                if off >= -1e-11 && off <= hi - lo + 1e-11 {
                    let theta = if self.factor {
                        wrap_angle(n * (lo + off))
                    } else {
                        wrap_angle(lo + off)
                    };
                    out.push(theta);
                }
            }
        }
        dedupe_angles(&mut out, 1e-9);
        out
    }

    /// Fixed points of the circle map, sorted by angle.
    pub fn fixed_points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let lifts = if self.factor { self.n() } else { 1 };
        let n = self.n() as f64;
        for e in &self.pockets.entries {
            let (lo, len) = if self.factor {
                (e.arc.0 / n, self.arc_len() / n)
            } else {
                (e.arc.0, self.arc_len())
            };
            for j in 0..lifts {
                let g = if j == 0 {
                    e.map
                } else {
                    self.preset.rotation.pow(-(j as i64)).compose(&e.map)
                };
                for z in g.fixed_points() {
                    if (z.norm() - 1.0).abs() > 1e-8 {
                        continue;
                    }
                    let off = ccw_distance(lo, z.arg());
                    let off = if off > TAU - 1e-10 { off - TAU } else { off };
                    if off >= -1e-10 && off <= len + 1e-10 {
                        let theta = if self.factor { n * (lo + off) } else { lo + off };
                        out.push(wrap_angle(theta));
                    }
                }
            }
        }
        dedupe_angles(&mut out, 1e-9);
        out
    }

    fn compute_marked_angle(&self) -> f64 {
        match self.preset.case {
            PairingCase::CaseI => 0.0,
            PairingCase::CaseII => {
                // The endpoint of l̃ in the pocket of C_{1,1}; it is swapped with the other
                // endpoint by g̃_1, so we take the first fixed point counterclockwise from it.
                let first_arc = TAU / self.preset.side_count() as f64;
                let axis = self.preset.axis;
                let e = if ccw_distance(0.0, axis.theta1) <= first_arc {
                    axis.theta1
                } else {
                    axis.theta2
                };
                let e = if self.factor { wrap_angle(e * self.n() as f64) } else { e };
                self.fixed_points()
                    .into_iter()
                    .min_by(|a, b| {
                        ccw_distance(e, *a)
                            .partial_cmp(&ccw_distance(e, *b))
                            .unwrap_or(Ordering::Equal)
                    })
                    .unwrap_or(e)
            }
        }
    }
}

fn dedupe_angles(v: &mut Vec<f64>, tol: f64) {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let mut out: Vec<f64> = Vec::with_capacity(v.len());
    for &x in v.iter() {
        if let Some(&last) = out.last() {
            if (x - last).abs() < tol {
                continue;
            }
        }
        out.push(x);
    }
    if out.len() > 1 {
        let first = out[0];
        let last = *out.last().unwrap();
        if TAU - last + first < tol {
            out.pop();
        }
    }
    *v = out;
}

/// A^BS or A^fBS on the circle.
pub fn eval_circle(m: &BowenSeriesMap, theta: f64) -> Result<f64, BowenSeriesError> {
    if m.near_breakpoint(theta) {
        return Err(BowenSeriesError::AtBreakpoint(theta));
    }
    Ok(m.eval_right(theta))
}

/// The factor map evaluated through the `lift`-th n-th root (identical to [`eval_circle`]
/// for the unfactored map).
pub fn eval_circle_lift(
    m: &BowenSeriesMap,
    theta: f64,
    lift: usize,
) -> Result<f64, BowenSeriesError> {
    if m.near_breakpoint(theta) {
        return Err(BowenSeriesError::AtBreakpoint(theta));
    }
    let k = m.pocket_index(theta);
    Ok(m.apply_branch(k, theta, lift % m.n().max(1)))
}

/// The map on the closed pockets (and their projections for the factor map).
pub fn eval_pocket(m: &BowenSeriesMap, z: C64) -> Result<C64, BowenSeriesError> {
    let n = m.n();
    let lifted = if m.factor && z.norm() > 0.0 {
        C64::from_polar(z.norm().powf(1.0 / n as f64), z.arg() / n as f64)
    } else {
        z
    };
    let k = pocket_containing(&m.preset.polygon, lifted)?;
    let w = m.preset.global_generator(k).apply(lifted);
    Ok(if m.factor { w.powu(n as u32) } else { w })
}

/// Side whose closed pocket contains `z`; ties on a side resolve to that side.
fn pocket_containing(poly: &IdealPolygon, z: C64) -> Result<usize, BowenSeriesError> {
    let tol = 1e-10;
    let (k, best) = poly
        .sides
        .iter()
        .enumerate()
        .map(|(k, s)| (k, s.ccw_region_signed(z)))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
        .ok_or(BowenSeriesError::OutsideDomain)?;
    if best < -tol {
        return Err(BowenSeriesError::OutsideDomain);
    }
    Ok(k)
}

/// Forward orbit on the circle, using right limits at breakpoints.
pub fn orbit(m: &BowenSeriesMap, theta: f64, steps: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(steps + 1);
    let mut t = wrap_angle(theta);
    out.push(t);
    for _ in 0..steps {
        t = m.eval_right(t);
        out.push(t);
    }
    out
}

/// Generic angles used for preimage counting.
pub fn generic_angles(count: usize) -> Vec<f64> {
    let golden = 0.618_033_988_749_894_8;
    (0..count)
        .map(|i| wrap_angle(TAU * ((i as f64 + golden) / count as f64) + 0.001_234_5))
        .collect()
}

/// Covering degree by counting preimages of 20 generic angles.
pub fn circle_degree(m: &BowenSeriesMap) -> Result<usize, BowenSeriesError> {
    let counts: Vec<usize> = generic_angles(20)
        .into_iter()
        .map(|psi| m.preimages(psi).len())
        .collect();
    if counts.iter().any(|&c| c != counts[0]) {
        return Err(BowenSeriesError::InconsistentDegree(counts));
    }
    Ok(counts[0])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovPartition {
    pub breakpoints: Vec<f64>,
    pub branch_maps: Vec<MobiusMap>,
    /// transition[i][j] = number of times the image of arc i covers arc j.
    pub transition: Vec<Vec<usize>>,
    pub max_endpoint_residual: f64,
}

/// Markov partition cut at the pocket endpoints.
pub fn markov_partition(m: &BowenSeriesMap) -> Result<MarkovPartition, BowenSeriesError> {
    let count = m.pockets.entries.len();
    let len = m.arc_len();
    let breakpoints = m.breakpoints();
    let mut transition = vec![vec![0usize; count]; count];
    let mut max_residual: f64 = 0.0;
    let n = if m.factor { m.n() as f64 } else { 1.0 };
    for (i, e) in m.pockets.entries.iter().enumerate() {
        // Unwrapped image in lifted coordinates, summed over small monotone steps.
        let steps = 256;
        let lift_lo = e.arc.0 / n;
        let lift_len = len / n;
        let mut total = 0.0;
        let mut prev = e.map.apply(cis(lift_lo)).arg();
        for t in 1..=steps {
            let x = lift_lo + lift_len * t as f64 / steps as f64;
            let cur = e.map.apply(cis(x)).arg();
            total += ccw_distance(prev, cur);
            prev = cur;
        }
        let start = wrap_angle(n * e.map.apply(cis(lift_lo)).arg());
        let end = wrap_angle(n * e.map.apply(cis(lift_lo + lift_len)).arg());
        let total = total * n;
        for pt in [start, end] {
            let x = pt / len;
            let residual = (x - x.round()).abs() * len;
            let residual = residual.min(TAU - residual);
            max_residual = max_residual.max(residual);
            if residual > 1e-8 {
                return Err(BowenSeriesError::MarkovViolation { arc: i, residual });
            }
        }
        let covered = (total / len).round() as usize;
        let first = ((start / len).round() as usize) % count;
        for c in 0..covered {
            transition[i][(first + c) % count] += 1;
        }
    }
    let branch_maps = m.pockets.entries.iter().map(|e| e.map).collect();
    Ok(MarkovPartition {
        breakpoints,
        branch_maps,
        transition,
        max_endpoint_residual: max_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyValue {
    /// Midpoint of the depth-k arc.
    pub angle: f64,
    /// Half-width of the depth-k arc, which contains h(θ).
    pub radius: f64,
    /// The depth-k arc, as angles.
    pub arc: (f64, f64),
}

/// Precomputed data for evaluating the conjugacy h between z^d and a continuous
/// Bowen-Series map.
#[derive(Debug, Clone)]
pub struct Conjugacy<'a> {
    map: &'a BowenSeriesMap,
    degree: usize,
    /// Offsets of the preimages of the marked point, counterclockwise from it, plus 2π.
    offsets: Vec<f64>,
}

impl<'a> Conjugacy<'a> {
    pub fn new(map: &'a BowenSeriesMap) -> Result<Self, BowenSeriesError> {
        if !map.is_continuous() {
            return Err(BowenSeriesError::Discontinuous);
        }
        let x0 = map.marked_fixed_angle;
        let d = map.expected_degree();
        let mut offsets: Vec<f64> = map
            .preimages(x0)
            .into_iter()
            .map(|t| {
                let o = ccw_distance(x0, t);
                if o > TAU - 1e-9 {
                    0.0
                } else {
                    o
                }
            })
            .collect();
        offsets.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        if offsets.len() != d || offsets[0].abs() > 1e-9 {
            return Err(BowenSeriesError::InconsistentDegree(vec![offsets.len()]));
        }
        offsets[0] = 0.0;
        offsets.push(TAU);
        Ok(Conjugacy {
            map,
            degree: d,
            offsets,
        })
    }

    /// Inverse branch onto the m-th arc, in offsets from the marked point.
    fn branch(&self, m: usize, psi: f64) -> f64 {
        let (lo, hi) = (self.offsets[m], self.offsets[m + 1]);
        if psi <= 0.0 {
            return lo;
        }
        if psi >= TAU {
            return hi;
        }
        let x0 = self.map.marked_fixed_angle;
        let pre = self.map.preimages(x0 + psi);
        let mut best = None;
        let mut best_gap = f64::INFINITY;
        for t in pre {
            let o = ccw_distance(x0, t);
            let gap = if o < lo {
                lo - o
            } else if o > hi {
                o - hi
            } else {
                0.0
            };
            if gap < best_gap {
                best_gap = gap;
                best = Some(o.clamp(lo, hi));
            }
        }
        best.unwrap_or(lo)
    }

    /// h at model angle `theta`, refined through `depth` inverse branches.
    pub fn eval(&self, theta: f64, depth: usize) -> Result<ConjugacyValue, BowenSeriesError> {
        if depth < 1 {
            return Err(BowenSeriesError::DepthTooSmall {
                depth,
                width: TAU,
            });
        }
        let d = self.degree as f64;
        let mut t = wrap_angle(theta) / TAU;
        // Itinerary under z^d, arcs cut at the preimages of 1.
        let mut symbols = Vec::with_capacity(depth);
        for _ in 0..depth {
            let x = t * d;
            let m = (x.floor() as usize).min(self.degree - 1);
            symbols.push(m);
            t = (x - m as f64).clamp(0.0, 1.0);
        }
        let (mut lo, mut hi) = (0.0, TAU);
        for &m in symbols.iter().rev() {
            let nlo = self.branch(m, lo);
            let nhi = self.branch(m, hi);
            lo = nlo;
            hi = nhi.max(nlo);
        }
        let x0 = self.map.marked_fixed_angle;
        let width = hi - lo;
        Ok(ConjugacyValue {
            angle: wrap_angle(x0 + lo + 0.5 * width),
            radius: 0.5 * width,
            arc: (wrap_angle(x0 + lo), wrap_angle(x0 + hi)),
        })
    }
}

/// h(θ) for the normalized conjugacy from z^d to the map; see [`Conjugacy`].
pub fn conjugacy_h(
    m: &BowenSeriesMap,
    theta: f64,
    depth: usize,
) -> Result<ConjugacyValue, BowenSeriesError> {
    Conjugacy::new(m)?.eval(theta, depth)
}

/// Like [`conjugacy_h`], failing with `DepthTooSmall` when the arc half-width exceeds `max_radius`.
pub fn conjugacy_h_within(
    m: &BowenSeriesMap,
    theta: f64,
    depth: usize,
    max_radius: f64,
) -> Result<ConjugacyValue, BowenSeriesError> {
    let v = conjugacy_h(m, theta, depth)?;
    if v.radius > max_radius {
        return Err(BowenSeriesError::DepthTooSmall {
            depth,
            width: v.radius,
        });
    }
    Ok(v)
}

/// A letter of a tile word: a first-sector generator or a power of the rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    /// g_s, 1-based.
    Gen(usize),
    /// M_ω^e with 1 ≤ e < n.
    Rot(usize),
}

pub fn format_word(word: &[Letter]) -> String {
    if word.is_empty() {
        return "id".into();
    }
    word.iter()
        .map(|l| match l {
            Letter::Gen(s) => format!("g{s}"),
            Letter::Rot(1) => "w".to_string(),
            Letter::Rot(e) => format!("w^{e}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Append a letter, merging rotation powers mod n.
pub fn push_letter(word: &mut Vec<Letter>, letter: Letter, n: usize) {
    match letter {
        Letter::Rot(e) => {
            let e = e % n.max(1);
            if e == 0 {
                return;
            }
            if let Some(Letter::Rot(prev)) = word.last().copied() {
                word.pop();
                let sum = (prev + e) % n;
                if sum != 0 {
                    word.push(Letter::Rot(sum));
                }
            } else {
                word.push(Letter::Rot(e));
            }
        }
        g => word.push(g),
    }
}

pub fn word_element(preset: &GroupPreset, word: &[Letter]) -> MobiusMap {
    word.iter().fold(MobiusMap::identity(), |acc, l| {
        let m = match l {
            Letter::Gen(s) => preset.first_sector[s - 1],
            Letter::Rot(e) => preset.rotation.pow(*e as i64),
        };
        acc.compose(&m)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tile {
    pub rank: usize,
    pub word: String,
    pub letters: Vec<Letter>,
    /// Pockets visited by the forward orbit, as global side indices.
    pub pockets: Vec<usize>,
    pub element: MobiusMap,
    /// Ideal vertices of the tile (images of the vertices of Π), as angles.
    pub vertices: Vec<f64>,
}

/// Tiles of rank ≤ `rank`: rank 0 is Π; rank-m tiles are the images of Π under the
/// admissible compositions of m inverse branches. For the factor map the first branch
/// runs over first-sector pockets only, giving one lift per quotient tile.
pub fn tiles(m: &BowenSeriesMap, rank: usize) -> Result<Vec<Tile>, BowenSeriesError> {
    if rank > MAX_RANK {
        return Err(BowenSeriesError::RankLimit(rank));
    }
    let g = &m.preset;
    let np = g.side_count();
    let n = g.n;
    let inverse_branch_word = |k: usize| -> Vec<Letter> {
        let (r, s) = g.sector_side(k);
        let mut w = Vec::new();
        push_letter(&mut w, Letter::Rot(r - 1), n);
        w.push(Letter::Gen(g.sigma[s - 1]));
        push_letter(&mut w, Letter::Rot((n - (r - 1)) % n), n);
        w
    };
    let branch_inverses: Vec<MobiusMap> = (0..np).map(|k| g.global_generator(k).inverse()).collect();
    let make_tile = |pockets: Vec<usize>, element: MobiusMap| -> Tile {
        let mut letters = Vec::new();
        for &k in &pockets {
            for l in inverse_branch_word(k) {
                push_letter(&mut letters, l, n);
            }
        }
        Tile {
            rank: pockets.len(),
            word: format_word(&letters),
            letters,
            pockets,
            vertices: g
                .polygon
                .vertices
                .iter()
                .map(|&v| element.apply_angle(v))
                .collect(),
            element,
        }
    };
    let mut out = vec![make_tile(vec![], MobiusMap::identity())];
    let mut frontier: Vec<(Vec<usize>, MobiusMap)> = vec![(vec![], MobiusMap::identity())];
    for _ in 1..=rank {
        let mut next = Vec::new();
        for (pockets, element) in &frontier {
            // Prepending a branch: new word = G_k^{-1} ∘ (previous word).
            for k in 0..np {
                if let Some(&first) = pockets.first() {
                    if first == g.paired_side(k) {
                        continue;
                    }
                }
                let mut ps = Vec::with_capacity(pockets.len() + 1);
                ps.push(k);
                ps.extend_from_slice(pockets);
                next.push((ps, branch_inverses[k].compose(element)));
            }
        }
        // For the factor map keep one lift per quotient tile: the outermost branch
        // lies in the first sector.
        for (ps, el) in next.iter().filter(|(ps, _)| !m.factor || ps[0] < g.p) {
            out.push(make_tile(ps.clone(), *el));
        }
        frontier = next;
    }
    out.sort_by(|a, b| {
        (a.letters.len(), &a.letters, &a.pockets).cmp(&(b.letters.len(), &b.letters, &b.pockets))
    });
    Ok(out)
}

/// Interior sample points of Π used for disjointness tests.
pub fn interior_samples(poly: &IdealPolygon, count: usize) -> Vec<C64> {
    let k = poly.vertices.len();
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let frac = (i as f64 + 0.5) / count as f64;
        let angle = TAU * frac * 3.0 + 0.37;
        let radius = 0.05 + 0.5 * frac;
        let z = C64::from_polar(radius, angle);
        if k >= 3 && poly.contains_interior(z) {
            out.push(z);
        } else {
            out.push(C64::from_polar(0.05 * frac, angle));
        }
    }
    out
}

/// Number of (tile, sample, other tile) incidences where a sample of one tile lies in
/// the interior of another.
pub fn count_overlaps(poly: &IdealPolygon, tiles: &[Tile], samples_per_tile: usize) -> usize {
    let samples = interior_samples(poly, samples_per_tile);
    let inverses: Vec<MobiusMap> = tiles.iter().map(|t| t.element.inverse()).collect();
    let mut overlaps = 0;
    for (i, t) in tiles.iter().enumerate() {
        for &s in &samples {
            let z = t.element.apply(s);
            for (j, inv) in inverses.iter().enumerate() {
                if i != j && poly.contains_interior(inv.apply(z)) {
                    overlaps += 1;
                }
            }
        }
    }
    overlaps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::build_group;

    #[test]
    fn factor_requires_rotation() {
        let g = build_group(1, 4, PairingCase::CaseI).unwrap();
        assert_eq!(
            BowenSeriesMap::new(g, true).unwrap_err(),
            BowenSeriesError::FactorNeedsRotation(1)
        );
    }

    #[test]
    fn word_rotation_merging() {
        let mut w = Vec::new();
        push_letter(&mut w, Letter::Rot(2), 3);
        push_letter(&mut w, Letter::Rot(1), 3);
        assert!(w.is_empty());
        push_letter(&mut w, Letter::Gen(1), 3);
        push_letter(&mut w, Letter::Rot(2), 3);
        assert_eq!(format_word(&w), "g1 w^2");
    }

    #[test]
    fn dedupe_wraps_around() {
        let mut v = vec![0.0, TAU - 1e-12, 1.0];
        dedupe_angles(&mut v, 1e-9);
        assert_eq!(v.len(), 2);
    }
}
