#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weldlab_core::fuchsian::{preset_grid, PairingCase};
use weldlab_core::mating_schema::*;

pub fn fixture(name: &str) -> MatingSchema {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    MatingSchema::from_json(&text).unwrap()
}

pub const FIXTURES: [&str; 7] = [
    "nested_squares",
    "pinched_square",
    "square_two_teardrops",
    "annulus_torus",
    "torus_unique_pole",
    "pants_genus_two",
    "annulus_genus_two",
];

/// A random valid schema. Group holes are pinched together at S-fixed corners so that
/// the hole/class incidence graph is a forest, with random rotation orders inside each
/// class. Optionally the first two holes touch along a σ-invariant corner set and even
/// holes are pinched across; both can disconnect 𝒟. Blaschke slots balance the degree
/// count when an unbounded slot is present.
pub fn random_schema(seed: u64) -> MatingSchema {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid: Vec<(usize, usize, PairingCase)> = preset_grid(4, 6)
        .into_iter()
        .filter(|&(n, p, _)| n * p >= 3)
        .collect();
    let holes = rng.gen_range(1..=5);
    let mut slots: Vec<Slot> = (0..holes)
        .map(|i| {
            let &(n, p, case) = grid.choose(&mut rng).unwrap();
            Slot::group(n, p, case).labeled(&format!("h{i}"))
        })
        .collect();

    // Corners available for pinching, per hole.
    let mut free: Vec<Vec<usize>> = slots
        .iter()
        .enumerate()
        .map(|(i, s)| build_hole(s, i).unwrap().fixed_corners)
        .collect();
    let mut classes: Vec<Vec<CornerSpec>> = Vec::new();
    // Whether every corner of a class is S-fixed, so another fixed corner may join it.
    let mut open: Vec<bool> = Vec::new();
    // (hole, corner, class) for every pinched corner.
    let mut class_of: Vec<(usize, usize, usize)> = Vec::new();
    let corner_spec = |h: usize, c: usize| CornerSpec(SlotRef::Index(h), c);

    // Two equal Case I holes touching along a σ-invariant set of corners.
    let paired = holes >= 2 && rng.gen_bool(0.3);
    if paired {
        let &&(n, p, _) = grid
            .iter()
            .filter(|g| g.2 == PairingCase::CaseI)
            .collect::<Vec<_>>()
            .choose(&mut rng)
            .unwrap();
        slots[0] = Slot::group(n, p, PairingCase::CaseI).labeled("h0");
        slots[1] = Slot::group(n, p, PairingCase::CaseI).labeled("h1");
        let mut orbits: Vec<usize> = (0..=p / 2).collect();
        orbits.shuffle(&mut rng);
        let take = rng.gen_range(1..=orbits.len());
        let mut corners: Vec<usize> = Vec::new();
        for &c in &orbits[..take] {
            corners.push(c);
            if (p - c) % p != c {
                corners.push(p - c);
            }
        }
        corners.sort_unstable();
        for h in 0..2 {
            free[h] = build_hole(&slots[h], h).unwrap().fixed_corners;
            free[h].retain(|c| !corners.contains(c));
        }
        for c in corners {
            let k = classes.len();
            let other = (p - c) % p;
            classes.push(vec![corner_spec(0, c), corner_spec(1, other)]);
            open.push(other == c);
            class_of.push((0, c, k));
            class_of.push((1, other, k));
        }
    }

    // Even Case I holes pinched across: corner 0 against corner p/2.
    for h in (if paired { 2 } else { 0 })..holes {
        if free[h].len() == 2 && rng.gen_bool(0.3) {
            let (a, b) = (free[h][0], free[h][1]);
            let k = classes.len();
            classes.push(vec![corner_spec(h, a), corner_spec(h, b)]);
            open.push(true);
            class_of.push((h, a, k));
            class_of.push((h, b, k));
            free[h].clear();
        }
    }

    for h in (if paired { 2 } else { 1 })..holes {
        if free[h].is_empty() || class_of.iter().any(|c| c.0 == h) || !rng.gen_bool(0.7) {
            continue;
        }
        let earlier: Vec<usize> = (0..h)
            .filter(|&e| !free[e].is_empty() || class_of.iter().any(|c| c.0 == e && open[c.2]))
            .collect();
        let Some(&e) = earlier.choose(&mut rng) else { continue };
        let i = rng.gen_range(0..free[h].len());
        let mine = free[h].remove(i);
        let spec = corner_spec(h, mine);
        let existing: Vec<(usize, usize, usize)> = class_of
            .iter()
            .copied()
            .filter(|c| c.0 == e && open[c.2])
            .collect();
        if !existing.is_empty() && (free[e].is_empty() || rng.gen_bool(0.5)) {
            let &(_, _, k) = existing.choose(&mut rng).unwrap();
            let at = rng.gen_range(0..=classes[k].len());
            classes[k].insert(at, spec);
            class_of.push((h, mine, k));
        } else if !free[e].is_empty() {
            let i = rng.gen_range(0..free[e].len());
            let theirs = free[e].remove(i);
            let k = classes.len();
            classes.push(vec![corner_spec(e, theirs), spec]);
            open.push(true);
            class_of.push((e, theirs, k));
            class_of.push((h, mine, k));
        } else {
            free[h].push(mine);
        }
    }

    // Attach each later pinch-tree to a random face of an earlier one.
    let mut tree: Vec<usize> = (0..holes).collect();
    for k in 0..classes.len() {
        let members: Vec<usize> = class_of.iter().filter(|c| c.2 == k).map(|c| c.0).collect();
        let root = members.iter().map(|&m| tree[m]).min().unwrap();
        let old: Vec<usize> = members.iter().map(|&m| tree[m]).collect();
        for t in tree.iter_mut() {
            if old.contains(t) {
                *t = root;
            }
        }
    }
    let mut embedding = Vec::new();
    for h in 1..holes {
        if tree[h] == h && rng.gen_bool(0.5) {
            let other: Vec<usize> = (0..h).filter(|&e| tree[e] != h).collect();
            let &e = other.choose(&mut rng).unwrap();
            let side_count = |i: usize| match slots[i].kind {
                SlotKind::Group { p, .. } => p,
                SlotKind::Blaschke { .. } => unreachable!(),
            };
            embedding.push(EmbeddingLink {
                side: SideSpec(SlotRef::Index(h), rng.gen_range(1..=side_count(h))),
                with: SideSpec(SlotRef::Index(e), rng.gen_range(1..=side_count(e))),
            });
        }
    }

    // Optionally make one hole unbounded, balancing degrees with quadratic Blaschke slots.
    if rng.gen_bool(0.5) {
        let u = rng.gen_range(0..holes);
        let bounded: usize = slots
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != u)
            .map(|(_, s)| s.circle_degree() - 1)
            .sum();
        let target = slots[u].circle_degree();
        if target >= bounded + 1 {
            slots[u] = slots[u].clone().unbounded();
            for _ in 0..target - bounded - 1 {
                slots.push(Slot::blaschke(2));
            }
        }
    } else {
        for _ in 0..rng.gen_range(0..3) {
            slots.push(Slot::blaschke(rng.gen_range(2..5)));
        }
    }

    MatingSchema {
        name: Some(format!("random-{seed}")),
        host: Host::Polynomial,
        polynomial: None,
        slots,
        identifications: classes
            .into_iter()
            .map(|corners| Identification { corners })
            .collect(),
        embedding,
    }
}

pub fn random_schemas(count: u64) -> impl Iterator<Item = MatingSchema> {
    (0..count).map(random_schema)
}
