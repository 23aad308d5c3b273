//! Welding two copies of the mating domain along the boundary involution: the welding
//! graph, the blender surface Σ as a CW complex with its involution η, and the zipped
//! quotient Σ̌.

use crate::mating_schema::{BoundaryComplex, UnionFind};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeldingError {
    #[error("gluing inconsistency: {0}")]
    GluingInconsistency(String),
    #[error("zipped component {component} has Euler characteristic {euler}, not a sphere")]
    ZipNotSphere { component: usize, euler: i64 },
    #[error("component {component} has Euler characteristic {euler}, not a closed orientable surface")]
    BadEuler { component: usize, euler: i64 },
    #[error("crosscheck failed: {0}")]
    CrosscheckFailed(String),
    #[error("the surface is disconnected ({0} components)")]
    Disconnected(usize),
}

/// Which copy of 𝒟 a cell lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn bit(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    fn from_bit(b: usize) -> Sign {
        if b == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// A face copy (Ω_i, ±), i.e. a vertex v_i^± of the welding graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceCopy {
    pub face: usize,
    pub sign: Sign,
}

impl FaceCopy {
    fn index(self) -> usize {
        2 * self.face + self.sign.bit()
    }

    fn from_index(i: usize) -> FaceCopy {
        FaceCopy {
            face: i / 2,
            sign: Sign::from_bit(i % 2),
        }
    }

    pub fn eta(self) -> FaceCopy {
        FaceCopy {
            face: self.face,
            sign: self.sign.flip(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeldingGraph {
    pub face_count: usize,
    /// Undirected edges {v_i^−, v_j^+}, stored as (i, j).
    pub edges: BTreeSet<(usize, usize)>,
    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub components: Vec<Vec<FaceCopy>>,
}

impl WeldingGraph {
    pub fn has_edge(&self, a: FaceCopy, b: FaceCopy) -> bool {
        match (a.sign, b.sign) {
            (Sign::Minus, Sign::Plus) => self.edges.contains(&(a.face, b.face)),
            (Sign::Plus, Sign::Minus) => self.edges.contains(&(b.face, a.face)),
            _ => false,
        }
    }

    /// Edge symmetry: (v_i^−, v_j^+) present iff (v_i^+, v_j^−) present.
    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|&(i, j)| self.edges.contains(&(j, i)))
    }

    pub fn component_of(&self, v: FaceCopy) -> usize {
        self.components
            .iter()
            .position(|c| c.contains(&v))
            .expect("every vertex lies in a component")
    }

    /// η̂ applied to a component, as a component index.
    pub fn eta_hat(&self, component: usize) -> usize {
        self.component_of(self.components[component][0].eta())
    }

    /// Index sets {i : v_i^− ∈ C} and {i : v_i^+ ∈ C}.
    pub fn index_sets(&self, component: usize) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let c = &self.components[component];
        let minus = c.iter().filter(|v| v.sign == Sign::Minus).map(|v| v.face).collect();
        let plus = c.iter().filter(|v| v.sign == Sign::Plus).map(|v| v.face).collect();
        (minus, plus)
    }
}

/// Welding graph: v_i^− — v_j^+ whenever S carries an arc of Ω_i into ∂Ω_j.
pub fn welding_graph(bc: &BoundaryComplex) -> WeldingGraph {
    graph_from_arcs(bc.face_count(), &bc.arc_face, &bc.s_arc)
}

fn graph_from_arcs(f: usize, arc_face: &[usize], s_arc: &[usize]) -> WeldingGraph {
    let mut edges = BTreeSet::new();
    for a in 0..arc_face.len() {
        edges.insert((arc_face[a], arc_face[s_arc[a]]));
    }
    let mut uf = UnionFind::new(2 * f);
    for &(i, j) in &edges {
        uf.union(
            FaceCopy { face: i, sign: Sign::Minus }.index(),
            FaceCopy { face: j, sign: Sign::Plus }.index(),
        );
    }
    let components = group_by_root(&mut uf, 2 * f)
        .into_iter()
        .map(|c| c.into_iter().map(FaceCopy::from_index).collect())
        .collect();
    WeldingGraph {
        face_count: f,
        edges,
        components,
    }
}

/// Members of each union-find class, classes ordered by smallest member.
fn group_by_root(uf: &mut UnionFind, n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut slot_of_root = vec![usize::MAX; n];
    for x in 0..n {
        let r = uf.find(x);
        if slot_of_root[r] == usize::MAX {
            slot_of_root[r] = out.len();
            out.push(Vec::new());
        }
        out[slot_of_root[r]].push(x);
    }
    out
}

/// Σ as a CW complex: two copies of each face, one edge per arc a (joining a on copy +
/// to S(a) on copy −), and vertex classes generated by the edge-end identifications.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeldedComplex {
    pub face_count: usize,
    /// Boundary-cycle count b_f of each face.
    pub face_boundaries: Vec<usize>,
    /// Face of each arc, and S on arcs (edge e_a ↦ e_{S(a)} under η).
    pub arc_face: Vec<usize>,
    pub s_arc: Vec<usize>,
    /// Vertex class of each (wedge, sign); wedge = walk-start of the arc with that index.
    pub wedge_class: Vec<usize>,
    pub vertex_count: usize,
    /// η on vertex classes.
    pub eta_vertex: Vec<usize>,
    /// Underlying boundary vertex of each wedge.
    pub wedge_vertex: Vec<usize>,
    /// Successor of each arc along its boundary cycle.
    pub walk_next: Vec<usize>,
}

impl WeldedComplex {
    pub fn edge_count(&self) -> usize {
        self.arc_face.len()
    }

    fn wedge_index(&self, arc: usize, sign: Sign) -> usize {
        2 * arc + sign.bit()
    }

    pub fn class_of(&self, arc: usize, sign: Sign) -> usize {
        self.wedge_class[self.wedge_index(arc, sign)]
    }

    /// Cell counts (V, E, F) of a genuine CW structure: each face with b boundary
    /// cycles is cut into a disk by b − 1 extra edges on each copy.
    pub fn cellular_counts(&self) -> (usize, usize, usize) {
        let cuts: usize = self.face_boundaries.iter().map(|b| b - 1).sum();
        (
            self.vertex_count,
            self.edge_count() + 2 * cuts,
            2 * self.face_count,
        )
    }

    pub fn euler_characteristic(&self) -> i64 {
        let (v, e, f) = self.cellular_counts();
        v as i64 - e as i64 + f as i64
    }
}

pub fn weld(bc: &BoundaryComplex) -> Result<WeldedComplex, WeldingError> {
    let a_count = bc.arcs.len();
    let mut uf = UnionFind::new(2 * a_count);
    for a in 0..a_count {
        let sa = bc.s_arc[a];
        if bc.s_arc[sa] != a || sa == a {
            return Err(WeldingError::GluingInconsistency(format!(
                "S is not a fixed-point-free involution on arcs at arc {a}"
            )));
        }
        // Start of a on one copy is glued to the end of S(a) on the other.
        let end_of_sa = bc.walk_next(sa);
        if bc.s_vertex[bc.walk_start(a)] != bc.walk_start(end_of_sa) {
            return Err(WeldingError::GluingInconsistency(format!(
                "arc {a}: start vertex {} is glued to vertex {}",
                bc.walk_start(a),
                bc.walk_start(end_of_sa)
            )));
        }
        for sign in [Sign::Plus, Sign::Minus] {
            uf.union(2 * a + sign.bit(), 2 * end_of_sa + sign.flip().bit());
        }
    }
    let groups = group_by_root(&mut uf, 2 * a_count);
    let mut wedge_class = vec![0usize; 2 * a_count];
    for (k, g) in groups.iter().enumerate() {
        for &w in g {
            wedge_class[w] = k;
        }
    }
    let mut eta_vertex = vec![usize::MAX; groups.len()];
    for (k, g) in groups.iter().enumerate() {
        let images: BTreeSet<usize> = g.iter().map(|&w| wedge_class[w ^ 1]).collect();
        if images.len() != 1 {
            return Err(WeldingError::GluingInconsistency(format!(
                "η does not map vertex class {k} to a single class"
            )));
        }
        eta_vertex[k] = *images.iter().next().unwrap();
    }
    Ok(WeldedComplex {
        face_count: bc.face_count(),
        face_boundaries: bc.faces.iter().map(|f| f.len()).collect(),
        arc_face: bc.arc_face.clone(),
        s_arc: bc.s_arc.clone(),
        wedge_class,
        vertex_count: groups.len(),
        eta_vertex,
        wedge_vertex: (0..a_count).map(|a| bc.walk_start(a)).collect(),
        walk_next: (0..a_count).map(|a| bc.walk_next(a)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceComponent {
    pub face_copies: Vec<FaceCopy>,
    pub euler: i64,
    pub genus: usize,
    pub vertices: usize,
    pub edges: usize,
    pub eta_invariant: bool,
    /// #Fix(η), when the component is η-invariant.
    pub fixed_points: Option<usize>,
    /// The η-image component when it differs.
    pub partner: Option<usize>,
    pub graph_component: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZippedComponent {
    pub faces: Vec<usize>,
    pub euler: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZippedReport {
    pub components: Vec<ZippedComponent>,
    pub all_spheres: bool,
}

/// Per-component record of the four equivalent conditions for η-invariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceCheck {
    pub cells_invariant: bool,
    pub graph_invariant: bool,
    pub index_sets_equal: bool,
    pub index_sets_meet: bool,
}

impl InvarianceCheck {
    pub fn consistent(&self) -> bool {
        let v = self.cells_invariant;
        self.graph_invariant == v && self.index_sets_equal == v && self.index_sets_meet == v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub components: Vec<SurfaceComponent>,
    pub euler: i64,
    pub connected: bool,
    pub graph_components: usize,
    pub invariance: Vec<InvarianceCheck>,
    pub zipped: ZippedReport,
}

impl SurfaceReport {
    /// Genus of a connected surface.
    pub fn genus(&self) -> Option<usize> {
        if self.connected {
            Some(self.components[0].genus)
        } else {
            None
        }
    }

    pub fn genera(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.genus).collect()
    }
}

/// Components, Euler characteristics, genera and the η-action on Σ.
pub fn surface_report(wc: &WeldedComplex) -> Result<SurfaceReport, WeldingError> {
    let f = wc.face_count;
    let a_count = wc.edge_count();
    // Cells: face copies [0, 2f), vertex classes [2f, 2f + V).
    let n_cells = 2 * f + wc.vertex_count;
    let mut uf = UnionFind::new(n_cells);
    for a in 0..a_count {
        let plus = FaceCopy { face: wc.arc_face[a], sign: Sign::Plus };
        let minus = FaceCopy { face: wc.arc_face[wc.s_arc[a]], sign: Sign::Minus };
        uf.union(plus.index(), minus.index());
        for sign in [Sign::Plus, Sign::Minus] {
            let fc = FaceCopy { face: wc.arc_face[a], sign };
            uf.union(fc.index(), 2 * f + wc.class_of(a, sign));
        }
    }
    let groups = group_by_root(&mut uf, n_cells);
    let comps: Vec<Vec<usize>> = groups
        .into_iter()
        .filter(|g| g[0] < 2 * f)
        .collect();
    let comp_of_cell = {
        let mut v = vec![usize::MAX; n_cells];
        for (k, g) in comps.iter().enumerate() {
            for &c in g {
                v[c] = k;
            }
        }
        v
    };
    let graph = graph_from_arcs(f, &wc.arc_face, &wc.s_arc);
    let mut components = Vec::new();
    let mut invariance = Vec::new();
    for (k, cells) in comps.iter().enumerate() {
        let face_copies: Vec<FaceCopy> = cells
            .iter()
            .filter(|&&c| c < 2 * f)
            .map(|&c| FaceCopy::from_index(c))
            .collect();
        let classes: Vec<usize> = cells.iter().filter(|&&c| c >= 2 * f).map(|&c| c - 2 * f).collect();
        let edges = (0..a_count)
            .filter(|&a| comp_of_cell[FaceCopy { face: wc.arc_face[a], sign: Sign::Plus }.index()] == k)
            .count();
        let faces_chi: i64 = face_copies
            .iter()
            .map(|fc| 2 - wc.face_boundaries[fc.face] as i64)
            .sum();
        let euler = faces_chi + classes.len() as i64 - edges as i64;
        if euler > 2 || euler % 2 != 0 {
            return Err(WeldingError::BadEuler { component: k, euler });
        }
        let genus = ((2 - euler) / 2) as usize;
        let image = comp_of_cell[face_copies[0].eta().index()];
        // Cell-level invariance: faces, edges and vertices all map into the component.
        let cells_invariant = face_copies
            .iter()
            .all(|fc| comp_of_cell[fc.eta().index()] == k)
            && classes
                .iter()
                .all(|&v| comp_of_cell[2 * f + wc.eta_vertex[v]] == k)
            && (0..a_count).all(|a| {
                let here = comp_of_cell[FaceCopy { face: wc.arc_face[a], sign: Sign::Plus }.index()] == k;
                let sa = wc.s_arc[a];
                let there =
                    comp_of_cell[FaceCopy { face: wc.arc_face[sa], sign: Sign::Plus }.index()] == k;
                !here || there
            });
        let fixed_points = if cells_invariant {
            Some(classes.iter().filter(|&&v| wc.eta_vertex[v] == v).count())
        } else {
            None
        };
        let g_comp = graph.component_of(face_copies[0]);
        let mut gset: Vec<FaceCopy> = graph.components[g_comp].clone();
        gset.sort();
        let mut fset = face_copies.clone();
        fset.sort();
        if gset != fset {
            return Err(WeldingError::GluingInconsistency(format!(
                "surface component {k} does not match welding-graph component {g_comp}"
            )));
        }
        let (minus, plus) = graph.index_sets(g_comp);
        invariance.push(InvarianceCheck {
            cells_invariant,
            graph_invariant: graph.eta_hat(g_comp) == g_comp,
            index_sets_equal: minus == plus,
            index_sets_meet: !minus.is_disjoint(&plus),
        });
        components.push(SurfaceComponent {
            face_copies,
            euler,
            genus,
            vertices: classes.len(),
            edges,
            eta_invariant: cells_invariant,
            fixed_points,
            partner: if image == k { None } else { Some(image) },
            graph_component: g_comp,
        });
    }
    let euler = components.iter().map(|c| c.euler).sum();
    let zipped = zip_arcs(
        &wc.face_boundaries,
        &wc.arc_face,
        &wc.s_arc,
        &wc.walk_next,
    );
    Ok(SurfaceReport {
        connected: components.len() == 1,
        graph_components: graph.components.len(),
        components,
        euler,
        invariance,
        zipped,
    })
}

fn zip_arcs(
    face_boundaries: &[usize],
    arc_face: &[usize],
    s_arc: &[usize],
    walk_next: &[usize],
) -> ZippedReport {
    let f = face_boundaries.len();
    let a_count = arc_face.len();
    let mut faces = UnionFind::new(f);
    let mut wedges = UnionFind::new(a_count);
    for a in 0..a_count {
        let sa = s_arc[a];
        faces.union(arc_face[a], arc_face[sa]);
        wedges.union(a, walk_next[sa]);
    }
    let groups = group_by_root(&mut faces, f);
    let mut comp_of_face = vec![0usize; f];
    for (k, g) in groups.iter().enumerate() {
        for &x in g {
            comp_of_face[x] = k;
        }
    }
    let mut vertex_roots: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); groups.len()];
    let mut edge_ends = vec![0usize; groups.len()];
    for a in 0..a_count {
        let k = comp_of_face[arc_face[a]];
        vertex_roots[k].insert(wedges.find(a));
        edge_ends[k] += 1;
    }
    let components: Vec<ZippedComponent> = groups
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let faces_chi: i64 = g.iter().map(|&x| 2 - face_boundaries[x] as i64).sum();
            ZippedComponent {
                faces: g.clone(),
                euler: faces_chi + vertex_roots[k].len() as i64 - (edge_ends[k] / 2) as i64,
            }
        })
        .collect();
    let all_spheres = components.iter().all(|c| c.euler == 2);
    ZippedReport {
        components,
        all_spheres,
    }
}

/// Σ̌: one copy of 𝒟 with each arc glued to its S-image. Every component must be a sphere.
pub fn zipped_report(bc: &BoundaryComplex) -> Result<ZippedReport, WeldingError> {
    let face_boundaries: Vec<usize> = bc.faces.iter().map(|f| f.len()).collect();
    let walk_next: Vec<usize> = (0..bc.arcs.len()).map(|a| bc.walk_next(a)).collect();
    let z = zip_arcs(&face_boundaries, &bc.arc_face, &bc.s_arc, &walk_next);
    if let Some((k, c)) = z.components.iter().enumerate().find(|(_, c)| c.euler != 2) {
        return Err(WeldingError::ZipNotSphere {
            component: k,
            euler: c.euler,
        });
    }
    Ok(z)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crosscheck {
    pub genus_from_euler: usize,
    pub genus_from_fixed_points: usize,
    pub fixed_points: usize,
    /// Order-2 orbifold points over all slots.
    pub b: usize,
    /// S-fixed points on ∂⁰𝒟.
    pub boundary_fixed_points: usize,
}

/// On a connected surface: g = (#Fix(η) − 2)/2, and b ≥ 3 or three S-fixed points on
/// ∂⁰𝒟 force g ≥ 1.
pub fn genus_crosscheck(sr: &SurfaceReport, bc: &BoundaryComplex) -> Result<Crosscheck, WeldingError> {
    if !sr.connected {
        return Err(WeldingError::Disconnected(sr.components.len()));
    }
    let c = &sr.components[0];
    let fix = c.fixed_points.ok_or_else(|| {
        WeldingError::CrosscheckFailed("connected surface is not η-invariant".into())
    })?;
    if fix < 2 || fix % 2 != 0 {
        return Err(WeldingError::CrosscheckFailed(format!(
            "η has {fix} fixed points"
        )));
    }
    let from_fix = (fix - 2) / 2;
    if from_fix != c.genus {
        return Err(WeldingError::CrosscheckFailed(format!(
            "genus {} from the Euler characteristic, {from_fix} from #Fix(η) = {fix}",
            c.genus
        )));
    }
    let b = bc.order_two_points();
    let boundary = bc.regular_fixed_points();
    if (b >= 3 || boundary >= 3) && c.genus == 0 {
        return Err(WeldingError::CrosscheckFailed(format!(
            "b = {b}, {boundary} boundary fixed points, but genus 0"
        )));
    }
    Ok(Crosscheck {
        genus_from_euler: c.genus,
        genus_from_fixed_points: from_fix,
        fixed_points: fix,
        b,
        boundary_fixed_points: boundary,
    })
}
