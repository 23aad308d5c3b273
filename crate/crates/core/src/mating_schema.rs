//! Combinatorial model of a conformal mating: slots, hole polygons with their boundary
//! involutions, corner identifications, and the planar map whose faces are the
//! components of the mating domain. Also the registry of explicit critically fixed
//! polynomials.

use crate::fuchsian::{sigma, PairingCase};
use crate::hyperbolic::C64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatingError {
    #[error("Blaschke slots do not create a hole")]
    BlaschkeHasNoHole,
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("corner identifications are not planar (component of hole {hole} has Euler characteristic {euler})")]
    NonPlanar { hole: usize, euler: i64 },
    #[error("identifications are not preserved by the boundary involution: {0}")]
    InconsistentInvolution(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("degree mismatch: unbounded slot has circle degree {found}, expected deg P = {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("polynomial verification failed: {0}")]
    VerificationFailed(String),
    #[error("unknown polynomial '{0}'")]
    UnknownPolynomial(String),
    #[error("the Newton schema needs n ≥ 3 (got {0})")]
    NewtonTooSmall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SlotKind {
    Group {
        n: usize,
        p: usize,
        case: PairingCase,
    },
    Blaschke {
        degree: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    #[default]
    Bounded,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub kind: SlotKind,
    #[serde(default)]
    pub placement: Placement,
}

impl Slot {
    pub fn group(n: usize, p: usize, case: PairingCase) -> Self {
        Slot {
            label: None,
            kind: SlotKind::Group { n, p, case },
            placement: Placement::Bounded,
        }
    }

    pub fn blaschke(degree: usize) -> Self {
        Slot {
            label: None,
            kind: SlotKind::Blaschke { degree },
            placement: Placement::Bounded,
        }
    }

    pub fn labeled(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn unbounded(mut self) -> Self {
        self.placement = Placement::Unbounded;
        self
    }

    /// Degree of the slot's map on the circle: np − 1 or the Blaschke degree.
    pub fn circle_degree(&self) -> usize {
        match self.kind {
            SlotKind::Group { n, p, .. } => n * p - 1,
            SlotKind::Blaschke { degree } => degree,
        }
    }

    fn validate(&self, index: usize) -> Result<(), MatingError> {
        let fail = |m: String| Err(MatingError::InvalidSchema(format!("slot {index}: {m}")));
        match self.kind {
            SlotKind::Group { n, p, case } => {
                if n == 0 || p == 0 {
                    return fail("n and p must be positive".into());
                }
                if n * p < 3 && self.placement == Placement::Bounded {
                    return fail(format!("bounded group slot needs np − 1 ≥ 2 (n = {n}, p = {p})"));
                }
                if n * p < 2 {
                    return fail("np must be at least 2".into());
                }
                if case == PairingCase::CaseII && (p % 2 == 1 || p < 4) {
                    return fail(format!("Case II needs an even p ≥ 4 (got {p})"));
                }
            }
            SlotKind::Blaschke { degree } => {
                if degree < 2 {
                    return fail(format!("Blaschke degree must be ≥ 2 (got {degree})"));
                }
            }
        }
        Ok(())
    }
}

/// Where the schema lives: a polynomial host (the degree formula applies) or a general
/// rational host such as a Newton map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Host {
    #[default]
    Polynomial,
    Rational,
}

/// A slot reference in a schema file: index or label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SlotRef {
    Index(usize),
    Label(String),
}

/// `[slot, corner]` with corners numbered 0..p−1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerSpec(pub SlotRef, pub usize);

/// `[slot, side]` with sides numbered 1..p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideSpec(pub SlotRef, pub usize);

/// One identification class, corners listed in counterclockwise order around the point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identification {
    pub corners: Vec<CornerSpec>,
}

/// Places the boundary cycle through `side` in the same face of 𝒟 as the cycle through
/// `with`. Only needed when the planar map is disconnected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingLink {
    pub side: SideSpec,
    pub with: SideSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatingSchema {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub host: Host,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<String>,
    pub slots: Vec<Slot>,
    #[serde(default)]
    pub identifications: Vec<Identification>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub embedding: Vec<EmbeddingLink>,
}

impl MatingSchema {
    pub fn from_json(text: &str) -> Result<Self, MatingError> {
        serde_json::from_str(text).map_err(|e| MatingError::InvalidSchema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schema serializes")
    }

    fn resolve_slot(&self, r: &SlotRef) -> Result<usize, MatingError> {
        match r {
            SlotRef::Index(i) if *i < self.slots.len() => Ok(*i),
            SlotRef::Index(i) => Err(MatingError::InvalidSchema(format!("no slot {i}"))),
            SlotRef::Label(l) => self
                .slots
                .iter()
                .position(|s| s.label.as_deref() == Some(l.as_str()))
                .ok_or_else(|| MatingError::InvalidSchema(format!("no slot labeled '{l}'"))),
        }
    }

    /// Validate slots and resolve identifications into [`ContactData`].
    pub fn contact_data(&self) -> Result<ContactData, MatingError> {
        for (i, s) in self.slots.iter().enumerate() {
            s.validate(i)?;
        }
        let mut labels = BTreeSet::new();
        for s in &self.slots {
            if let Some(l) = &s.label {
                if !labels.insert(l.clone()) {
                    return Err(MatingError::InvalidSchema(format!("duplicate label '{l}'")));
                }
            }
        }
        let corner = |c: &CornerSpec| -> Result<CornerRef, MatingError> {
            let slot = self.resolve_slot(&c.0)?;
            match self.slots[slot].kind {
                SlotKind::Group { p, .. } if c.1 < p => Ok(CornerRef { slot, corner: c.1 }),
                SlotKind::Group { p, .. } => Err(MatingError::InvalidSchema(format!(
                    "slot {slot} has corners 0..{} (got {})",
                    p - 1,
                    c.1
                ))),
                SlotKind::Blaschke { .. } => Err(MatingError::BlaschkeHasNoHole),
            }
        };
        let side = |c: &SideSpec| -> Result<SideRef, MatingError> {
            let slot = self.resolve_slot(&c.0)?;
            match self.slots[slot].kind {
                SlotKind::Group { p, .. } if (1..=p).contains(&c.1) => {
                    Ok(SideRef { slot, side: c.1 })
                }
                SlotKind::Group { p, .. } => Err(MatingError::InvalidSchema(format!(
                    "slot {slot} has sides 1..{p} (got {})",
                    c.1
                ))),
                SlotKind::Blaschke { .. } => Err(MatingError::BlaschkeHasNoHole),
            }
        };
        let classes = self
            .identifications
            .iter()
            .map(|id| id.corners.iter().map(corner).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let embedding = self
            .embedding
            .iter()
            .map(|l| Ok((side(&l.side)?, side(&l.with)?)))
            .collect::<Result<Vec<_>, MatingError>>()?;
        Ok(ContactData { classes, embedding })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CornerRef {
    pub slot: usize,
    pub corner: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SideRef {
    pub slot: usize,
    pub side: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ContactData {
    /// Identification classes, each in counterclockwise rotation order.
    pub classes: Vec<Vec<CornerRef>>,
    pub embedding: Vec<(SideRef, SideRef)>,
}

/// The boundary of the hole left by a group slot: p sides, side s running from corner
/// s−1 to corner s with the hole on the left.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleBoundary {
    pub slot: usize,
    pub p: usize,
    pub case: PairingCase,
    /// Side pairing, 1-based.
    pub sigma: Vec<usize>,
    /// Corner map induced by the side pairing (orientation reversing).
    pub corner_map: Vec<usize>,
    pub fixed_corners: Vec<usize>,
    /// Self-paired sides, each carrying one fixed point in its interior.
    pub fixed_sides: Vec<usize>,
}

impl HoleBoundary {
    /// Side numbered 1..p for a corner index taken mod p (corner 0 ↦ side p).
    pub fn side_ending_at(&self, corner: usize) -> usize {
        let c = corner % self.p;
        if c == 0 {
            self.p
        } else {
            c
        }
    }
}

pub fn build_hole(slot: &Slot, slot_index: usize) -> Result<HoleBoundary, MatingError> {
    let (p, case) = match slot.kind {
        SlotKind::Group { p, case, .. } => (p, case),
        SlotKind::Blaschke { .. } => return Err(MatingError::BlaschkeHasNoHole),
    };
    slot.validate(slot_index)?;
    let sig = sigma(case, p);
    // Side s starts at corner s−1 and ends at corner s; the pairing sends the start of
    // side s to the end of side σ(s).
    let corner_map: Vec<usize> = (0..p)
        .map(|c| {
            let s = c + 1;
            sig[s - 1] % p
        })
        .collect();
    let fixed_corners = (0..p).filter(|&c| corner_map[c] == c).collect();
    let fixed_sides = (1..=p).filter(|&s| sig[s - 1] == s).collect();
    Ok(HoleBoundary {
        slot: slot_index,
        p,
        case,
        sigma: sig,
        corner_map,
        fixed_corners,
        fixed_sides,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcPart {
    Whole,
    /// From the side's start corner to its interior fixed point.
    First,
    /// From the interior fixed point to the side's end corner.
    Second,
}

/// An arc of ∂𝒟: a side of a hole, or half of a self-paired side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryArc {
    pub hole: usize,
    pub side: usize,
    pub part: ArcPart,
    /// Endpoints in the hole's orientation (hole on the left).
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BoundaryVertex {
    /// An identification class of corners (a singleton for an unpinched corner).
    Corner { corners: Vec<CornerRef> },
    /// The fixed point inside a self-paired side.
    Interior { hole: usize, side: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryComplex {
    pub slots: Vec<Slot>,
    pub holes: Vec<HoleBoundary>,
    pub vertices: Vec<BoundaryVertex>,
    pub arcs: Vec<BoundaryArc>,
    /// Boundary cycles of 𝒟, each a list of arcs in walk order (𝒟 on the left, so every
    /// arc is traversed against its hole orientation).
    pub cycles: Vec<Vec<usize>>,
    /// Faces Ω_i of 𝒟 as lists of boundary cycles.
    pub faces: Vec<Vec<usize>>,
    /// Boundary involution on arcs.
    pub s_arc: Vec<usize>,
    /// Boundary involution on vertices.
    pub s_vertex: Vec<usize>,
    pub arc_face: Vec<usize>,
    pub arc_cycle: Vec<usize>,
    /// Components of the planar map, as lists of hole indices.
    pub map_components: Vec<Vec<usize>>,
}

impl BoundaryComplex {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Number of boundary cycles of face `f`.
    pub fn boundary_count(&self, f: usize) -> usize {
        self.faces[f].len()
    }

    /// Walk-order successor of an arc within its cycle.
    pub fn walk_next(&self, arc: usize) -> usize {
        let c = &self.cycles[self.arc_cycle[arc]];
        let i = c.iter().position(|&a| a == arc).expect("arc in its cycle");
        c[(i + 1) % c.len()]
    }

    /// Vertex where the walk starts along `arc` (its end in hole orientation).
    pub fn walk_start(&self, arc: usize) -> usize {
        self.arcs[arc].end
    }

    pub fn walk_end(&self, arc: usize) -> usize {
        self.arcs[arc].start
    }

    /// Vertices of ∂𝒟 not in the singular set X: fixed points inside sides and corners
    /// that are not pinched to anything else.
    pub fn is_singular(&self, v: usize) -> bool {
        matches!(&self.vertices[v], BoundaryVertex::Corner { corners } if corners.len() > 1)
    }

    /// S-fixed points on ∂⁰𝒟.
    pub fn regular_fixed_points(&self) -> usize {
        (0..self.vertices.len())
            .filter(|&v| self.s_vertex[v] == v && !self.is_singular(v))
            .count()
    }

    /// Total count b of order-2 orbifold points over the group slots (one per
    /// self-paired side of each hole).
    pub fn order_two_points(&self) -> usize {
        self.holes.iter().map(|h| h.fixed_sides.len()).sum()
    }

    pub fn hole_of_slot(&self, slot: usize) -> Option<usize> {
        self.holes.iter().position(|h| h.slot == slot)
    }
}

/// Disjoint-set forest with path compression; roots are the smallest members.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Returns false when already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Build the boundary complex: split self-paired sides, trace the faces of 𝒟 from the
/// rotation system, and assemble the boundary involution.
pub fn assemble(slots: &[Slot], contact: &ContactData) -> Result<BoundaryComplex, MatingError> {
    let mut holes = Vec::new();
    let mut hole_of_slot = BTreeMap::new();
    for (i, s) in slots.iter().enumerate() {
        s.validate(i)?;
        if let SlotKind::Group { .. } = s.kind {
            hole_of_slot.insert(i, holes.len());
            holes.push(build_hole(s, i)?);
        }
    }
    let hole_index = |c: &CornerRef| -> Result<usize, MatingError> {
        hole_of_slot
            .get(&c.slot)
            .copied()
            .ok_or(MatingError::BlaschkeHasNoHole)
    };

    // Corner classes.
    let mut class_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut vertices: Vec<BoundaryVertex> = Vec::new();
    let mut rotation: Vec<Vec<(usize, usize)>> = Vec::new();
    for class in &contact.classes {
        if class.is_empty() {
            return Err(MatingError::InvalidSchema("empty identification class".into()));
        }
        let mut members = Vec::new();
        for c in class {
            let h = hole_index(c)?;
            if c.corner >= holes[h].p {
                return Err(MatingError::InvalidSchema(format!(
                    "corner {} out of range for slot {}",
                    c.corner, c.slot
                )));
            }
            if class_of.insert((h, c.corner), vertices.len()).is_some() {
                return Err(MatingError::InvalidSchema(format!(
                    "corner {} of slot {} appears in two classes",
                    c.corner, c.slot
                )));
            }
            members.push((h, c.corner));
        }
        vertices.push(BoundaryVertex::Corner {
            corners: class.clone(),
        });
        rotation.push(members);
    }
    for (h, hole) in holes.iter().enumerate() {
        for c in 0..hole.p {
            if let std::collections::btree_map::Entry::Vacant(e) = class_of.entry((h, c)) {
                e.insert(vertices.len());
                vertices.push(BoundaryVertex::Corner {
                    corners: vec![CornerRef {
                        slot: hole.slot,
                        corner: c,
                    }],
                });
                rotation.push(vec![(h, c)]);
            }
        }
    }
    let corner_vertex_count = vertices.len();

    // S on corner classes must permute the classes.
    let mut s_vertex = vec![usize::MAX; corner_vertex_count];
    for (v, members) in rotation.iter().enumerate() {
        let images: BTreeSet<usize> = members
            .iter()
            .map(|&(h, c)| class_of[&(h, holes[h].corner_map[c])])
            .collect();
        if images.len() != 1 {
            return Err(MatingError::InconsistentInvolution(format!(
                "corners {:?} are identified but their images are not",
                members
            )));
        }
        let w = *images.iter().next().unwrap();
        if rotation[w].len() != members.len() {
            return Err(MatingError::InconsistentInvolution(format!(
                "class {:?} maps into a class of different size",
                members
            )));
        }
        s_vertex[v] = w;
    }

    // Arcs in hole orientation, split at interior fixed points.
    let mut arcs: Vec<BoundaryArc> = Vec::new();
    // (hole, side) -> arc ids in hole orientation.
    let mut side_arcs: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (h, hole) in holes.iter().enumerate() {
        for s in 1..=hole.p {
            let start = class_of[&(h, s - 1)];
            let end = class_of[&(h, s % hole.p)];
            if hole.fixed_sides.contains(&s) {
                let mid = vertices.len();
                vertices.push(BoundaryVertex::Interior { hole: h, side: s });
                s_vertex.push(mid);
                let a = arcs.len();
                arcs.push(BoundaryArc {
                    hole: h,
                    side: s,
                    part: ArcPart::First,
                    start,
                    end: mid,
                });
                arcs.push(BoundaryArc {
                    hole: h,
                    side: s,
                    part: ArcPart::Second,
                    start: mid,
                    end,
                });
                side_arcs.insert((h, s), vec![a, a + 1]);
            } else {
                side_arcs.insert((h, s), vec![arcs.len()]);
                arcs.push(BoundaryArc {
                    hole: h,
                    side: s,
                    part: ArcPart::Whole,
                    start,
                    end,
                });
            }
        }
    }

    // Boundary involution on arcs.
    let mut s_arc = vec![usize::MAX; arcs.len()];
    for (a, arc) in arcs.iter().enumerate() {
        let hole = &holes[arc.hole];
        let ids = &side_arcs[&(arc.hole, arc.side)];
        s_arc[a] = match arc.part {
            ArcPart::First => ids[1],
            ArcPart::Second => ids[0],
            ArcPart::Whole => side_arcs[&(arc.hole, hole.sigma[arc.side - 1])][0],
        };
    }

    // Walk successor: each arc is traversed backwards; at a corner turn to the
    // counterclockwise-previous corner of the class.
    let mut next = vec![usize::MAX; arcs.len()];
    for (a, arc) in arcs.iter().enumerate() {
        let ids = &side_arcs[&(arc.hole, arc.side)];
        if arc.part == ArcPart::Second {
            next[a] = ids[0];
            continue;
        }
        let corner = arc.side - 1;
        let v = class_of[&(arc.hole, corner)];
        let members = &rotation[v];
        let pos = members
            .iter()
            .position(|&m| m == (arc.hole, corner))
            .expect("corner in its class");
        let (h2, c2) = members[(pos + members.len() - 1) % members.len()];
        let side2 = holes[h2].side_ending_at(c2);
        next[a] = *side_arcs[&(h2, side2)].last().unwrap();
    }
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut arc_cycle = vec![usize::MAX; arcs.len()];
    for start in 0..arcs.len() {
        if arc_cycle[start] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cyc = Vec::new();
        let mut a = start;
        while arc_cycle[a] == usize::MAX {
            arc_cycle[a] = id;
            cyc.push(a);
            a = next[a];
        }
        if a != start {
            return Err(MatingError::InvalidSchema(
                "rotation system does not define a permutation".into(),
            ));
        }
        cycles.push(cyc);
    }

    // Components of the planar map and their Euler characteristics.
    let mut uf = UnionFind::new(holes.len());
    for members in &rotation {
        for w in members.windows(2) {
            uf.union(w[0].0, w[1].0);
        }
    }
    let mut comp_of_hole = vec![0usize; holes.len()];
    let mut roots: Vec<usize> = Vec::new();
    for h in 0..holes.len() {
        let r = uf.find(h);
        let idx = match roots.iter().position(|&x| x == r) {
            Some(i) => i,
            None => {
                roots.push(r);
                roots.len() - 1
            }
        };
        comp_of_hole[h] = idx;
    }
    let comp_count = roots.len();
    let mut map_components = vec![Vec::new(); comp_count];
    for h in 0..holes.len() {
        map_components[comp_of_hole[h]].push(h);
    }
    let mut euler = vec![0i64; comp_count];
    for (v, vert) in vertices.iter().enumerate() {
        let h = match vert {
            BoundaryVertex::Corner { .. } => rotation[v][0].0,
            BoundaryVertex::Interior { hole, .. } => *hole,
        };
        euler[comp_of_hole[h]] += 1;
    }
    for arc in &arcs {
        euler[comp_of_hole[arc.hole]] -= 1;
    }
    for (h, _) in holes.iter().enumerate() {
        euler[comp_of_hole[h]] += 1;
    }
    let cycle_comp: Vec<usize> = cycles
        .iter()
        .map(|c| comp_of_hole[arcs[c[0]].hole])
        .collect();
    for &c in &cycle_comp {
        euler[c] += 1;
    }
    for (c, &e) in euler.iter().enumerate() {
        if e != 2 {
            return Err(MatingError::NonPlanar {
                hole: map_components[c][0],
                euler: e,
            });
        }
    }

    // Faces: cycles of different map components may share a face.
    let mut fuf = UnionFind::new(cycles.len());
    let mut placed = UnionFind::new(comp_count);
    for (x, y) in &contact.embedding {
        let cx = arc_cycle[*side_arcs[&(hole_of_slot[&x.slot], x.side)].last().unwrap()];
        let cy = arc_cycle[*side_arcs[&(hole_of_slot[&y.slot], y.side)].last().unwrap()];
        if cycle_comp[cx] == cycle_comp[cy] {
            return Err(MatingError::InvalidEmbedding(format!(
                "sides {:?} and {:?} lie in the same map component",
                x, y
            )));
        }
        fuf.union(cx, cy);
        placed.union(cycle_comp[cx], cycle_comp[cy]);
    }
    // Groups of components not yet placed relative to component 0 go in the face of
    // its first cycle, attached through their smallest component.
    let first_cycle = |comp: usize| cycle_comp.iter().position(|&c| c == comp).unwrap();
    for comp in 1..comp_count {
        if placed.find(comp) == comp && placed.find(0) != comp {
            fuf.union(first_cycle(comp), first_cycle(0));
            placed.union(comp, 0);
        }
    }
    let mut face_of_cycle = vec![usize::MAX; cycles.len()];
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut face_roots: Vec<usize> = Vec::new();
    for c in 0..cycles.len() {
        let r = fuf.find(c);
        let f = match face_roots.iter().position(|&x| x == r) {
            Some(i) => i,
            None => {
                face_roots.push(r);
                faces.push(Vec::new());
                face_roots.len() - 1
            }
        };
        faces[f].push(c);
        face_of_cycle[c] = f;
    }
    // The component/face incidence graph must be a tree for the placement to exist.
    let mut inc = UnionFind::new(comp_count + faces.len());
    for c in 0..cycles.len() {
        if !inc.union(cycle_comp[c], comp_count + face_of_cycle[c]) {
            return Err(MatingError::InvalidEmbedding(
                "the requested face merges cannot be realized on the sphere".into(),
            ));
        }
    }
    let root = inc.find(0);
    if (0..comp_count + faces.len()).any(|x| inc.find(x) != root) {
        return Err(MatingError::InvalidEmbedding(
            "map components are not all placed".into(),
        ));
    }
    let arc_face = arc_cycle.iter().map(|&c| face_of_cycle[c]).collect();

    Ok(BoundaryComplex {
        slots: slots.to_vec(),
        holes,
        vertices,
        arcs,
        cycles,
        faces,
        s_arc,
        s_vertex,
        arc_face,
        arc_cycle,
        map_components,
    })
}

/// Parse, validate and assemble a schema.
pub fn assemble_schema(schema: &MatingSchema) -> Result<BoundaryComplex, MatingError> {
    let contact = schema.contact_data()?;
    assemble(&schema.slots, &contact)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub host: Host,
    /// Degree of the polynomial host; None for rational hosts.
    pub deg_p: Option<usize>,
    /// deg P + 1, the degree of the uniformizing map; meaningful for connected surfaces.
    pub d_r: Option<usize>,
    pub unbounded_circle_degree: Option<usize>,
}

pub fn validate_degrees(slots: &[Slot], host: Host) -> Result<DegreeReport, MatingError> {
    let unbounded: Vec<&Slot> = slots
        .iter()
        .filter(|s| s.placement == Placement::Unbounded)
        .collect();
    if unbounded.len() > 1 {
        return Err(MatingError::InvalidSchema(
            "at most one slot can be unbounded".into(),
        ));
    }
    let unbounded_circle_degree = unbounded.first().map(|s| s.circle_degree());
    if host == Host::Rational {
        return Ok(DegreeReport {
            host,
            deg_p: None,
            d_r: None,
            unbounded_circle_degree,
        });
    }
    let deg_p = slots
        .iter()
        .filter(|s| s.placement == Placement::Bounded)
        .map(|s| s.circle_degree() - 1)
        .sum::<usize>()
        + 1;
    if let Some(s) = unbounded.first() {
        if let SlotKind::Group { .. } = s.kind {
            if s.circle_degree() != deg_p {
                return Err(MatingError::DegreeMismatch {
                    expected: deg_p,
                    found: s.circle_degree(),
                });
            }
        }
    }
    Ok(DegreeReport {
        host,
        deg_p: Some(deg_p),
        d_r: Some(deg_p + 1),
        unbounded_circle_degree,
    })
}

/// n teardrop holes (Γ_{3,1} factor maps) meeting at one point, inside a Newton map.
pub fn newton_schema(n: usize) -> Result<MatingSchema, MatingError> {
    if n < 3 {
        return Err(MatingError::NewtonTooSmall(n));
    }
    let slots = (0..n)
        .map(|i| Slot::group(3, 1, PairingCase::CaseI).labeled(&format!("basin{}", i + 1)))
        .collect();
    let corners = (0..n).map(|i| CornerSpec(SlotRef::Index(i), 0)).collect();
    Ok(MatingSchema {
        name: Some(format!("newton_{n}")),
        host: Host::Rational,
        polynomial: None,
        slots,
        identifications: vec![Identification { corners }],
        embedding: vec![],
    })
}

// ---------------------------------------------------------------------------------
// Polynomial registry

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub point: C64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialEntry {
    pub name: String,
    pub description: String,
    /// Coefficients in ascending powers.
    pub coefficients: Vec<C64>,
    pub critical_points: Vec<CriticalPoint>,
    pub fixed_points: Vec<C64>,
}

impl PolynomialEntry {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// k-th derivative at z.
    pub fn derivative(&self, k: usize, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (j, &c) in self.coefficients.iter().enumerate().skip(k).rev() {
            let falling: f64 = ((j - k + 1)..=j).map(|x| x as f64).product();
            acc = acc * z + c * falling;
        }
        acc
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.derivative(0, z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalCheck {
    pub point: C64,
    pub multiplicity: usize,
    pub fixed_residual: f64,
    /// |P^(k)(c)| for k = 1..=multiplicity + 1.
    pub derivatives: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialReport {
    pub name: String,
    pub degree: usize,
    pub critical: Vec<CriticalCheck>,
    pub fixed_residuals: Vec<f64>,
    /// Σ multiplicities including ∞ (which has multiplicity deg − 1).
    pub multiplicity_total: usize,
    pub max_residual: f64,
}

pub const VANISH_TOL: f64 = 1e-8;
pub const NONVANISH_TOL: f64 = 1e-4;

pub fn verify_polynomial(entry: &PolynomialEntry) -> Result<PolynomialReport, MatingError> {
    if entry.coefficients.len() < 2 || entry.coefficients.iter().any(|c| !c.is_finite()) {
        return Err(MatingError::VerificationFailed(format!(
            "{}: coefficients must be finite with degree ≥ 1",
            entry.name
        )));
    }
    let d = entry.degree();
    let mut max_residual: f64 = 0.0;
    let mut critical = Vec::new();
    for cp in &entry.critical_points {
        let fixed_residual = (entry.eval(cp.point) - cp.point).norm();
        let derivatives: Vec<f64> = (1..=cp.multiplicity + 1)
            .map(|k| entry.derivative(k, cp.point).norm())
            .collect();
        max_residual = max_residual.max(fixed_residual);
        if fixed_residual >= VANISH_TOL {
            return Err(MatingError::VerificationFailed(format!(
                "{}: critical point {} is not fixed (residual {fixed_residual:.3e})",
                entry.name, cp.point
            )));
        }
        for (k, &m) in derivatives.iter().enumerate().take(cp.multiplicity) {
            max_residual = max_residual.max(m);
            if m >= VANISH_TOL {
                return Err(MatingError::VerificationFailed(format!(
                    "{}: derivative {} at {} is {m:.3e}",
                    entry.name,
                    k + 1,
                    cp.point
                )));
            }
        }
        let top = derivatives[cp.multiplicity];
        if top < NONVANISH_TOL {
            return Err(MatingError::VerificationFailed(format!(
                "{}: multiplicity at {} exceeds {}",
                entry.name, cp.point, cp.multiplicity
            )));
        }
        critical.push(CriticalCheck {
            point: cp.point,
            multiplicity: cp.multiplicity,
            fixed_residual,
            derivatives,
        });
    }
    let fixed_residuals: Vec<f64> = entry
        .fixed_points
        .iter()
        .map(|&z| (entry.eval(z) - z).norm())
        .collect();
    for &r in &fixed_residuals {
        max_residual = max_residual.max(r);
        if r >= VANISH_TOL {
            return Err(MatingError::VerificationFailed(format!(
                "{}: declared fixed point residual {r:.3e}",
                entry.name
            )));
        }
    }
    let multiplicity_total =
        entry.critical_points.iter().map(|c| c.multiplicity).sum::<usize>() + (d - 1);
    if multiplicity_total != 2 * d - 2 {
        return Err(MatingError::VerificationFailed(format!(
            "{}: critical multiplicities sum to {multiplicity_total}, expected {}",
            entry.name,
            2 * d - 2
        )));
    }
    Ok(PolynomialReport {
        name: entry.name.clone(),
        degree: d,
        critical,
        fixed_residuals,
        multiplicity_total,
        max_residual,
    })
}

/// Solve 15α + 6α⁷ − 14α⁵ᾱ² = 0 for a non-real α by Newton's method in (Re α, Im α).
pub fn solve_septic_alpha(start: C64) -> Result<(C64, f64), MatingError> {
    let f = |a: C64| 15.0 * a + 6.0 * a.powu(7) - 14.0 * a.powu(5) * a.conj().powu(2);
    let mut a = start;
    for _ in 0..100 {
        let fa = 15.0 + 42.0 * a.powu(6) - 70.0 * a.powu(4) * a.conj().powu(2);
        let fb = -28.0 * a.powu(5) * a.conj();
        // Columns of the real Jacobian: ∂F/∂x and ∂F/∂y.
        let dx = fa + fb;
        let dy = C64::new(0.0, 1.0) * (fa - fb);
        let v = f(a);
        let det = dx.re * dy.im - dy.re * dx.im;
        if det.abs() < 1e-300 {
            break;
        }
        let sx = (v.re * dy.im - dy.re * v.im) / det;
        let sy = (dx.re * v.im - v.re * dx.im) / det;
        a -= C64::new(sx, sy);
        if sx.hypot(sy) < 1e-15 * a.norm().max(1.0) {
            break;
        }
    }
    let residual = f(a).norm();
    if !(residual < 1e-10) || a.im.abs() < 1e-6 {
        return Err(MatingError::VerificationFailed(format!(
            "Newton iteration for α did not reach a non-real root (residual {residual:.3e})"
        )));
    }
    Ok((a, residual))
}

/// Critical points and coefficients of the degree-7 polynomial, from α in the first
/// quadrant.
pub fn septic_entry(alpha: C64) -> PolynomialEntry {
    let a2 = alpha * alpha;
    let s = a2 + a2.conj();
    let m4 = alpha.norm_sqr().powi(2);
    let zero = C64::new(0.0, 0.0);
    let mut coefficients = vec![zero; 8];
    coefficients[7] = C64::new(1.0, 0.0);
    coefficients[5] = -s * (7.0 / 5.0);
    coefficients[3] = C64::new(7.0 / 3.0 * m4, 0.0);
    let cp = |z: C64, m: usize| CriticalPoint {
        point: z,
        multiplicity: m,
    };
    PolynomialEntry {
        name: "septic".into(),
        description: "z^7 - (7/5)(α²+ᾱ²) z^5 + (7/3)|α|⁴ z³".into(),
        coefficients,
        critical_points: vec![
            cp(zero, 2),
            cp(alpha, 1),
            cp(alpha.conj(), 1),
            cp(-alpha, 1),
            cp(-alpha.conj(), 1),
        ],
        fixed_points: vec![],
    }
}

pub fn registry() -> Result<Vec<PolynomialEntry>, MatingError> {
    let c = |re: f64, im: f64| C64::new(re, im);
    let cp = |z: C64, m: usize| CriticalPoint {
        point: z,
        multiplicity: m,
    };
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let cbrt3 = 3f64.cbrt();
    let cubic = PolynomialEntry {
        name: "cubic".into(),
        description: "z^3 + 3z/2".into(),
        coefficients: vec![c(0.0, 0.0), c(1.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        critical_points: vec![cp(c(0.0, r2), 1), cp(c(0.0, -r2), 1)],
        fixed_points: vec![c(0.0, 0.0)],
    };
    let quartic = PolynomialEntry {
        name: "quartic".into(),
        description: "z^4 + 4z^3/∛9".into(),
        coefficients: vec![
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(4.0 / 9f64.cbrt(), 0.0),
            c(1.0, 0.0),
        ],
        critical_points: vec![cp(c(-cbrt3, 0.0), 1), cp(c(0.0, 0.0), 2)],
        fixed_points: vec![],
    };
    let (alpha, _) = solve_septic_alpha(C64::new(1.0, 0.3))?;
    Ok(vec![cubic, quartic, septic_entry(alpha)])
}

pub fn polynomial_by_name(name: &str) -> Result<PolynomialEntry, MatingError> {
    registry()?
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| MatingError::UnknownPolynomial(name.to_string()))
}
