use num_complex::Complex64 as C64;
use std::f64::consts::{PI, TAU};
use weldlab_core::bowen_series::*;
use weldlab_core::fuchsian::*;
use weldlab_core::hyperbolic::*;

fn map(n: usize, p: usize, case: PairingCase, factor: bool) -> BowenSeriesMap {
    BowenSeriesMap::new(build_group(n, p, case).unwrap(), factor).unwrap()
}

fn circle_gap(a: f64, b: f64) -> f64 {
    let d = ccw_distance(a, b);
    d.min(TAU - d)
}

// Counts preimages of `target` by sampling each pocket arc and detecting where the
// (monotone) image sweeps past the target. Uses only forward evaluation.
fn sampled_preimage_count(m: &BowenSeriesMap, target: f64) -> usize {
    let arcs = m.breakpoints();
    let len = TAU / arcs.len() as f64;
    let steps = 4000;
    let mut count = 0;
    for &start in &arcs {
        let mut prev = None;
        for i in 0..=steps {
            let t = start + len * (i as f64 / steps as f64);
            let t = t.clamp(start + 1e-11, start + len - 1e-11);
            let a = if i == 0 { m.eval_right(t) } else { m.eval_left(t) };
            if let Some(p) = prev {
                let step = ccw_distance(p, a);
                let hit = ccw_distance(p, target);
                if hit > 0.0 && hit <= step {
                    count += 1;
                }
            }
            prev = Some(a);
        }
    }
    count
}

#[test]
fn degree_matches_sampled_oracle_on_grid() {
    for (n, p, case) in preset_grid(5, 6) {
        let m = map(n, p, case, false);
        let d = circle_degree(&m).unwrap();
        assert_eq!(d, n * p - 1, "{n},{p},{case}");
        for psi in [0.4321, 2.2345, 5.0101] {
            assert_eq!(sampled_preimage_count(&m, psi), d, "{n},{p},{case} at {psi}");
        }
        if n >= 2 {
            let f = map(n, p, case, true);
            assert_eq!(circle_degree(&f).unwrap(), n * p - 1, "factor {n},{p},{case}");
            assert_eq!(sampled_preimage_count(&f, 1.2345), n * p - 1);
        }
    }
}

#[test]
fn paper_degrees() {
    assert_eq!(circle_degree(&map(1, 4, PairingCase::CaseI, false)).unwrap(), 3);
    assert_eq!(circle_degree(&map(3, 1, PairingCase::CaseI, true)).unwrap(), 2);
    assert_eq!(circle_degree(&map(5, 1, PairingCase::CaseI, true)).unwrap(), 4);
}

#[test]
fn square_marked_point_is_fixed() {
    let m = map(1, 4, PairingCase::CaseI, false);
    assert_eq!(m.marked_fixed_angle, 0.0);
    assert!(circle_gap(m.eval_right(0.0), 0.0) < 1e-12);
    assert!(circle_gap(m.eval_left(0.0), 0.0) < 1e-12);
    assert!(matches!(
        eval_circle(&m, 0.0),
        Err(BowenSeriesError::AtBreakpoint(_))
    ));
}

#[test]
fn factor_is_continuous_at_projected_breakpoint() {
    let m = map(3, 1, PairingCase::CaseI, true);
    let left = m.eval_left(0.0);
    let right = m.eval_right(0.0);
    assert!(circle_gap(left, right) < 1e-9);
    // One-sided limits by approach.
    let a = eval_circle(&m, 1e-7).unwrap();
    let b = eval_circle(&m, TAU - 1e-7).unwrap();
    assert!(circle_gap(a, b) < 1e-5);
}

#[test]
fn unfactored_rotation_case_jumps() {
    let m = map(3, 1, PairingCase::CaseI, false);
    assert!(!m.is_continuous());
    assert!(circle_gap(m.eval_left(0.0), m.eval_right(0.0)) > 1.0);
    assert_eq!(
        conjugacy_h(&m, 0.3, 4).unwrap_err(),
        BowenSeriesError::Discontinuous
    );
}

#[test]
fn markov_square() {
    let m = map(1, 4, PairingCase::CaseI, false);
    let mp = markov_partition(&m).unwrap();
    assert_eq!(mp.breakpoints.len(), 4);
    assert!(mp.max_endpoint_residual < 1e-8);
    for (i, row) in mp.transition.iter().enumerate() {
        assert_eq!(row.iter().sum::<usize>(), 3);
        // The only arc not covered is the paired one.
        let missing: Vec<usize> = (0..4).filter(|&j| row[j] == 0).collect();
        assert_eq!(missing, vec![m.preset.paired_side(i)]);
    }
}

#[test]
fn markov_teardrop_factor() {
    let m = map(3, 1, PairingCase::CaseI, true);
    let mp = markov_partition(&m).unwrap();
    assert_eq!(mp.breakpoints, vec![0.0]);
    assert_eq!(mp.transition, vec![vec![2]]);
}

#[test]
fn markov_rows_match_degree_on_grid() {
    for (n, p, case) in preset_grid(5, 6) {
        for factor in [false, true] {
            if factor && n < 2 {
                continue;
            }
            let m = map(n, p, case, factor);
            let mp = markov_partition(&m).unwrap();
            for row in &mp.transition {
                assert_eq!(row.iter().sum::<usize>(), n * p - 1, "{n},{p},{case},{factor}");
            }
        }
    }
}

fn side_samples(g: &Geodesic, count: usize) -> Vec<C64> {
    (0..count)
        .map(|i| g.point_at(-3.0 + 6.0 * i as f64 / (count - 1) as f64))
        .collect()
}

#[test]
fn pocket_map_sends_sides_to_paired_sides_and_is_an_involution() {
    for (n, p, case) in preset_grid(5, 6) {
        let m = map(n, p, case, false);
        let np = n * p;
        let per_side = 200 / np + 1;
        for k in 0..np {
            let side = m.preset.polygon.sides[k];
            let paired = m.preset.polygon.sides[m.preset.paired_side(k)];
            for z in side_samples(&side, per_side) {
                let w = eval_pocket(&m, z).unwrap();
                assert!(paired.residual(w) < 1e-8, "{n},{p},{case} side {k}");
                let back = eval_pocket(&m, w).unwrap();
                assert!((back - z).norm() < 1e-8, "{n},{p},{case} side {k}");
            }
        }
    }
}

#[test]
fn polygon_interior_is_outside_domain() {
    let m = map(1, 4, PairingCase::CaseI, false);
    assert_eq!(
        eval_pocket(&m, C64::new(0.1, 0.05)).unwrap_err(),
        BowenSeriesError::OutsideDomain
    );
}

#[test]
fn factor_lifts_agree_and_rotation_commutes() {
    for (n, p, case) in preset_grid(5, 6) {
        if n < 2 {
            continue;
        }
        let f = map(n, p, case, true);
        let a = map(n, p, case, false);
        for i in 0..50 {
            let theta = TAU * (i as f64 + 0.377) / 50.0;
            let base = eval_circle(&f, theta).unwrap();
            for lift in 1..n {
                let other = eval_circle_lift(&f, theta, lift).unwrap();
                assert!(circle_gap(base, other) < 1e-9, "{n},{p},{case}");
            }
            let rot = TAU / n as f64;
            let lhs = eval_circle(&a, theta + rot).unwrap();
            let rhs = eval_circle(&a, theta).unwrap() + rot;
            assert!(circle_gap(lhs, rhs) < 1e-9, "{n},{p},{case}");
        }
    }
}

fn winding_number(f: impl Fn(C64) -> C64, center: C64, radius: f64) -> i64 {
    let steps = 720;
    let mut total = 0.0;
    let mut prev = f(center + radius).arg();
    for i in 1..=steps {
        let z = center + C64::from_polar(radius, TAU * i as f64 / steps as f64);
        let cur = f(z).arg();
        let mut d = cur - prev;
        while d > PI {
            d -= TAU;
        }
        while d < -PI {
            d += TAU;
        }
        total += d;
        prev = cur;
    }
    (total / TAU).round() as i64
}

#[test]
fn factor_critical_points_have_local_degree_n() {
    for (n, p, case) in preset_grid(5, 6) {
        if n < 3 {
            continue;
        }
        let f = map(n, p, case, true);
        for s in 1..=p {
            let zc = f.preset.first_sector[s - 1].inverse().apply(C64::new(0.0, 0.0));
            let wc = zc.powu(n as u32);
            let r = 1e-4 * (1.0 - wc.norm());
            let k = winding_number(|w| eval_pocket(&f, w).unwrap(), wc, r);
            assert_eq!(k, n as i64, "{n},{p},{case} s={s}");
        }
    }
}

fn functional_residual(m: &BowenSeriesMap, depth: usize, samples: usize) -> f64 {
    let c = Conjugacy::new(m).unwrap();
    let d = m.expected_degree() as f64;
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let theta = TAU * (i as f64 + 0.5) / samples as f64;
        let h = c.eval(theta, depth).unwrap().angle;
        let hd = c.eval(wrap_angle(d * theta), depth).unwrap().angle;
        worst = worst.max(circle_gap(hd, m.eval_right(h)));
    }
    worst
}

#[test]
fn conjugacy_normalization_and_monotonicity() {
    for m in [
        map(1, 4, PairingCase::CaseI, false),
        map(3, 1, PairingCase::CaseI, true),
        map(1, 4, PairingCase::CaseII, false),
    ] {
        let c = Conjugacy::new(&m).unwrap();
        let h0 = c.eval(0.0, 10).unwrap();
        assert!(circle_gap(h0.angle, m.marked_fixed_angle) <= h0.radius + 1e-12);
        assert!(circle_gap(h0.arc.0, m.marked_fixed_angle) < 1e-12);
        let mut prev = 0.0;
        for i in 0..400 {
            let theta = TAU * (i as f64 + 0.5) / 400.0;
            let v = c.eval(theta, 8).unwrap();
            let off = ccw_distance(m.marked_fixed_angle, v.angle);
            assert!(off >= prev - 1e-12, "{} at {i}", m.preset.label());
            prev = off;
        }
    }
}

#[test]
fn case_two_marked_point_is_fixed() {
    let m = map(1, 4, PairingCase::CaseII, false);
    let x0 = m.marked_fixed_angle;
    assert!(circle_gap(m.eval_right(x0), x0) < 1e-9);
    assert!(m.fixed_points().len() == m.expected_degree() - 1);
}

#[test]
fn conjugacy_residual_shrinks_with_depth() {
    for m in [
        map(1, 4, PairingCase::CaseI, false),
        map(3, 1, PairingCase::CaseI, true),
    ] {
        let r6 = functional_residual(&m, 6, 300);
        let r12 = functional_residual(&m, 12, 300);
        assert!(r12 < r6, "{}: {r12} vs {r6}", m.preset.label());
    }
}

#[test]
fn conjugacy_width_guard() {
    let m = map(1, 4, PairingCase::CaseI, false);
    assert!(matches!(
        conjugacy_h_within(&m, 1.0, 1, 1e-6),
        Err(BowenSeriesError::DepthTooSmall { .. })
    ));
    assert!(matches!(
        conjugacy_h(&m, 1.0, 0),
        Err(BowenSeriesError::DepthTooSmall { .. })
    ));
}

#[test]
fn tile_counts() {
    let m = map(1, 4, PairingCase::CaseI, false);
    let t = tiles(&m, 3).unwrap();
    let per_rank = |r: usize| t.iter().filter(|x| x.rank == r).count();
    assert_eq!(per_rank(0), 1);
    assert_eq!(t[0].word, "id");
    assert_eq!(per_rank(1), 4);
    assert_eq!(per_rank(2), 12);
    assert_eq!(per_rank(3), 36);
    let f = map(3, 1, PairingCase::CaseI, true);
    let t = tiles(&f, 3).unwrap();
    let per_rank = |r: usize| t.iter().filter(|x| x.rank == r).count();
    assert_eq!((per_rank(1), per_rank(2), per_rank(3)), (1, 2, 4));
    assert_eq!(tiles(&f, 9).unwrap_err(), BowenSeriesError::RankLimit(9));
}

#[test]
fn tiles_are_canonically_ordered() {
    let m = map(2, 2, PairingCase::CaseI, false);
    let t = tiles(&m, 3).unwrap();
    for w in t.windows(2) {
        assert!(
            (w[0].letters.len(), &w[0].letters) <= (w[1].letters.len(), &w[1].letters),
            "{} before {}",
            w[0].word,
            w[1].word
        );
    }
    // Each tile's element matches its word.
    for tile in &t {
        assert!(word_element(&m.preset, &tile.letters).approx_eq(&tile.element, 1e-9));
    }
}

#[test]
fn tiles_have_disjoint_interiors() {
    for (n, p, case) in [
        (1, 4, PairingCase::CaseI),
        (1, 4, PairingCase::CaseII),
        (3, 1, PairingCase::CaseI),
        (2, 3, PairingCase::CaseI),
    ] {
        let m = map(n, p, case, false);
        let t = tiles(&m, 3).unwrap();
        assert_eq!(count_overlaps(&m.preset.polygon, &t, 8), 0, "{n},{p},{case}");
    }
}

#[test]
fn tile_lies_in_its_pocket() {
    let m = map(1, 5, PairingCase::CaseI, false);
    for t in tiles(&m, 2).unwrap().iter().filter(|t| t.rank > 0) {
        let z = t.element.apply(C64::new(0.0, 0.0));
        let side = m.preset.polygon.sides[t.pockets[0]];
        assert!(side.ccw_region_signed(z) > 0.0, "{}", t.word);
    }
}
