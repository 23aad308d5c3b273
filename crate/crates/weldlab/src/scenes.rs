//! Scene builders for the figures: fundamental polygons, tessellations, hole diagrams
//! and welding graphs.

use crate::svg::{Primitive, RenderScene, Style};
use num_complex::Complex64 as C64;
use std::f64::consts::{PI, TAU};
use weldlab_core::bowen_series::Tile;
use weldlab_core::correspondence_model::ModelTile;
use weldlab_core::fuchsian::GroupPreset;
use weldlab_core::mating_schema::{BoundaryComplex, BoundaryVertex, Placement};
use weldlab_core::welding::{Sign, WeldingGraph};

const PALETTE: [&str; 8] = [
    "#e07b39", "#3a7dc9", "#5aa469", "#c94f7c", "#8a6fc4", "#c9a93a", "#4bb3b3", "#7d7d7d",
];

fn color(k: usize) -> &'static str {
    PALETTE[k % PALETTE.len()]
}

/// Π with its pockets shaded; the first-sector pockets are drawn in the accent color.
pub fn polygon_scene(g: &GroupPreset) -> RenderScene {
    let mut scene = RenderScene::disk();
    let np = g.side_count();
    let pockets = (0..np)
        .map(|k| Primitive::Pocket {
            from: g.vertex_angle(k),
            to: g.vertex_angle(k + 1),
            style: Style::fill(if k < g.p { color(0) } else { color(7) }, 0.6),
        })
        .collect();
    scene.layer(pockets);
    let vertices: Vec<C64> = (0..np).map(|k| C64::from_polar(1.0, g.vertex_angle(k))).collect();
    let (a, b) = g.axis.endpoints();
    scene.layer(vec![
        Primitive::GeodesicPolygon {
            points: vertices,
            style: Style::stroke("black", 1.5),
        },
        Primitive::Geodesic {
            from: a,
            to: b,
            style: Style::stroke(color(1), 1.0),
        },
    ]);
    scene
}

/// Bowen-Series tiles colored by rank, over Π and its pockets.
pub fn tile_scene(g: &GroupPreset, tiles: &[Tile]) -> RenderScene {
    let mut scene = polygon_scene(g);
    let layer = tiles
        .iter()
        .map(|t| Primitive::GeodesicPolygon {
            points: t.vertices.iter().map(|&a| C64::from_polar(1.0, a)).collect(),
            style: Style::fill(color(t.rank), 0.35).outlined("black", 0.4),
        })
        .collect();
    scene.layer(layer);
    scene
}

/// Tiles of a correspondence-model tiling, colored by word length.
pub fn model_tile_scene(tiles: &[ModelTile]) -> RenderScene {
    let mut scene = RenderScene::disk();
    let layer = tiles
        .iter()
        .map(|t| Primitive::GeodesicPolygon {
            points: t.vertices.clone(),
            style: Style::fill(color(t.letters.len()), 0.35).outlined("black", 0.4),
        })
        .collect();
    scene.layer(layer);
    scene
}

/// Schematic hole diagram: each group hole as a circle with its corners marked, and
/// pinched corner classes joined to a common point.
pub fn hole_scene(bc: &BoundaryComplex) -> RenderScene {
    let h = bc.holes.len();
    let radius = 0.4;
    // Neighbouring holes sit 0.3 apart.
    let ring = if h == 1 { 0.0 } else { (radius + 0.15) / (PI / h as f64).sin() };
    let center = |k: usize| C64::from_polar(ring, TAU * k as f64 / h.max(1) as f64);
    // Corner 0 faces the middle of the layout.
    let corner_pos = |k: usize, c: usize| {
        let p = bc.holes[k].p;
        let facing = if h == 1 { 0.0 } else { TAU * k as f64 / h as f64 + PI };
        center(k) + C64::from_polar(radius, facing + TAU * c as f64 / p as f64)
    };
    let side_pos = |k: usize, s: usize| {
        let p = bc.holes[k].p;
        let facing = if h == 1 { 0.0 } else { TAU * k as f64 / h as f64 + PI };
        center(k) + C64::from_polar(radius, facing + TAU * (s as f64 - 0.5) / p as f64)
    };

    let mut outlines = Vec::new();
    let mut marks = Vec::new();
    let mut links = Vec::new();
    for (k, hole) in bc.holes.iter().enumerate() {
        let slot = &bc.slots[hole.slot];
        let mut style = Style::fill(color(k), 0.25).outlined("black", 1.0);
        if slot.placement == Placement::Unbounded {
            style.fill = "none".into();
        }
        outlines.push(Primitive::Circle {
            center: center(k),
            radius,
            style,
        });
        let label = slot.label.clone().unwrap_or_else(|| format!("slot {}", hole.slot));
        marks.push(Primitive::Point {
            at: center(k),
            radius: 0.0,
            label: Some(label),
            style: Style::fill("black", 1.0),
        });
        for &s in &hole.fixed_sides {
            marks.push(Primitive::Point {
                at: side_pos(k, s),
                radius: 3.0,
                label: None,
                style: Style::fill("white", 1.0).outlined("black", 1.0),
            });
        }
    }
    let hole_of_slot: Vec<Option<usize>> = (0..bc.slots.len()).map(|s| bc.hole_of_slot(s)).collect();
    for v in &bc.vertices {
        let BoundaryVertex::Corner { corners } = v else { continue };
        let points: Vec<C64> = corners
            .iter()
            .filter_map(|c| hole_of_slot[c.slot].map(|k| corner_pos(k, c.corner)))
            .collect();
        if points.len() > 1 {
            let mid = points.iter().sum::<C64>() / points.len() as f64;
            for &q in &points {
                links.push(Primitive::Segment {
                    a: q,
                    b: mid,
                    style: Style::stroke("black", 1.0),
                });
            }
            marks.push(Primitive::Point {
                at: mid,
                radius: 4.0,
                label: None,
                style: Style::fill("black", 1.0),
            });
        } else {
            for &q in &points {
                marks.push(Primitive::Point {
                    at: q,
                    radius: 3.0,
                    label: None,
                    style: Style::fill("black", 1.0),
                });
            }
        }
    }
    let extent = ring + radius + 0.2;
    let mut scene = RenderScene::plane(C64::new(-extent, -extent), C64::new(extent, extent));
    scene.layer(outlines);
    scene.layer(links);
    scene.layer(marks);
    scene
}

/// Welding graph: v_i^+ on the top row, v_i^− on the bottom row, edges {v_i^−, v_j^+}.
pub fn welding_graph_scene(g: &WeldingGraph) -> RenderScene {
    let gap = 0.5;
    let pos = |face: usize, sign: Sign| {
        C64::new(gap * face as f64, if sign == Sign::Plus { gap } else { 0.0 })
    };
    let mut component = vec![[0usize; 2]; g.face_count];
    for (k, comp) in g.components.iter().enumerate() {
        for fc in comp {
            component[fc.face][(fc.sign == Sign::Minus) as usize] = k;
        }
    }
    let edges = g
        .edges
        .iter()
        .map(|&(i, j)| Primitive::Segment {
            a: pos(i, Sign::Minus),
            b: pos(j, Sign::Plus),
            style: Style::stroke(color(component[i][1]), 1.5),
        })
        .collect();
    let mut vertices = Vec::new();
    for face in 0..g.face_count {
        for (sign, mark) in [(Sign::Plus, "+"), (Sign::Minus, "−")] {
            vertices.push(Primitive::Point {
                at: pos(face, sign),
                radius: 5.0,
                label: Some(format!("v{face}{mark}")),
                style: Style::fill(color(component[face][(sign == Sign::Minus) as usize]), 1.0),
            });
        }
    }
    let width = gap * g.face_count.saturating_sub(1) as f64;
    let mut scene = RenderScene::plane(C64::new(-0.25, -0.25), C64::new(width + 0.25, gap + 0.25));
    scene.layer(edges);
    scene.layer(vertices);
    scene
}
