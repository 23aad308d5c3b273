use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use weldlab_core::correspondence_model::*;
use weldlab_core::fuchsian::*;
use weldlab_core::hyperbolic::{cis, MobiusMap};

fn model(n: usize, p: usize, case: PairingCase) -> ModelTilingSet {
    ModelTilingSet::new(n, p, case).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng, p: usize) -> ModelPoint {
    let r = 0.99 * rng.gen::<f64>().sqrt();
    ModelPoint::new(C64::from_polar(r, TAU * rng.gen::<f64>()), rng.gen_range(1..=p))
}

/// All (u, i) with uⁿ = wⁿ, by enumerating n-th roots directly.
fn root_fiber(n: usize, p: usize, z: ModelPoint) -> Vec<ModelPoint> {
    let mut out = Vec::new();
    for i in 1..=p {
        for k in 0..n {
            out.push(ModelPoint::new(z.w * cis(TAU * k as f64 / n as f64), i));
        }
    }
    out
}

#[test]
fn teardrop_fiber_is_roots_of_unity() {
    let m = model(3, 1, PairingCase::CaseI);
    let f = fiber(&m, ModelPoint::new(C64::new(0.5, 0.0), 1)).unwrap();
    let omega = cis(TAU / 3.0);
    let expected = [C64::new(0.5, 0.0), 0.5 * omega, 0.5 * omega * omega];
    assert_eq!(f.len(), 3);
    for (a, b) in f.iter().zip(expected) {
        assert!((a.w - b).norm() < 1e-15);
    }
}

#[test]
fn two_by_two_fiber() {
    let m = model(2, 2, PairingCase::CaseI);
    let f = fiber(&m, ModelPoint::new(C64::new(0.3, 0.0), 1)).unwrap();
    let expected = [(0.3, 1), (0.3, 2), (-0.3, 1), (-0.3, 2)];
    assert_eq!(f.len(), 4);
    for (a, (w, j)) in f.iter().zip(expected) {
        assert_eq!(a.j, j);
        assert!((a.w - C64::new(w, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn critical_fiber_has_p_points() {
    for (n, p, case) in preset_grid(5, 6) {
        let m = model(n, p, case);
        let f = fiber(&m, ModelPoint::new(C64::new(0.0, 0.0), 1)).unwrap();
        assert_eq!(f.len(), p, "{n},{p},{case}");
    }
}

#[test]
fn fiber_rejects_outside_points() {
    let m = model(3, 1, PairingCase::CaseI);
    assert!(matches!(
        fiber(&m, ModelPoint::new(C64::new(1.0, 0.0), 1)),
        Err(CorrespondenceError::OutsideDisk(_))
    ));
}

#[test]
fn fiber_equals_root_enumeration_on_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (n, p, case) in preset_grid(5, 6) {
        let m = model(n, p, case);
        for _ in 0..100 {
            let z = random_point(&mut rng, p);
            let orbit = fiber(&m, z).unwrap();
            let roots = root_fiber(n, p, z);
            assert_eq!(orbit.len(), n * p);
            for q in &roots {
                let best = orbit.iter().map(|o| o.distance(q)).fold(f64::INFINITY, f64::min);
                assert!(best <= 1e-12, "{n},{p},{case}");
            }
            for o in &orbit {
                assert!((m.r_model(*o) - m.r_model(z)).norm() <= 1e-12);
            }
        }
    }
}

#[test]
fn tau_has_order_np_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, p, case) in preset_grid(5, 6) {
        let m = model(n, p, case);
        let np = (n * p) as i64;
        for _ in 0..20 {
            let z = random_point(&mut rng, p);
            let mut cur = z;
            for k in 1..=np {
                cur = m.tau(cur);
                // A single full turn multiplies by ωⁿ, which is exactly 1 only up to
                // rounding; compare the component and the modulus exactly.
                if k < np {
                    assert!(cur.distance(&z) > 0.0 || z.w.norm() == 0.0);
                }
            }
            assert_eq!(cur.j, z.j);
            assert!((cur.w - z.w).norm() < 1e-14);
            assert!((m.r_model(m.tau(z)) - m.r_model(z)).norm() < 1e-14);
            assert_eq!(m.tau_inverse(m.tau(z)).j, z.j);
        }
    }
}

#[test]
fn k_exponents_return_each_component() {
    for (n, p, case) in preset_grid(5, 6) {
        let m = model(n, p, case);
        for j in 1..=p {
            let k = m.k_exponents[j - 1];
            assert!((1..=n * p).contains(&k));
            assert_eq!((j + n * p - m.sigma[j - 1]) % (n * p), k % (n * p));
            let z = ModelPoint::new(C64::new(0.2, 0.1), j);
            let eta = m.eta(z);
            assert_eq!(eta.j, m.sigma[j - 1]);
            assert_eq!(m.tau_pow(eta, k as i64).j, j);
        }
    }
}

#[test]
fn teardrop_branches() {
    let m = model(3, 1, PairingCase::CaseI);
    let b = branch_words(&m);
    assert_eq!(b.labels, vec!["τ∘η", "τ^2∘η"]);
    assert!(b.generating_residual < 1e-12);
    assert!(b.involution_residual < 1e-12);
    let m = model(2, 1, PairingCase::CaseI);
    assert_eq!(branch_words(&m).labels, vec!["τ∘η"]);
}

#[test]
fn branch_count_is_circle_degree() {
    for (n, p, case) in preset_grid(5, 6) {
        let m = model(n, p, case);
        let b = branch_words(&m);
        assert_eq!(b.branches.len(), n * p - 1);
        assert!(b.involution_residual < 1e-10, "{n},{p},{case}");
        assert!(b.generating_residual < 1e-10, "{n},{p},{case}");
    }
}

#[test]
fn eta_squares_to_identity_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (n, p, case) in [(3, 1, PairingCase::CaseI), (2, 3, PairingCase::CaseI), (1, 4, PairingCase::CaseII)] {
        let m = model(n, p, case);
        for _ in 0..100 {
            let z = random_point(&mut rng, p);
            assert!(m.eta(m.eta(z)).distance(&z) < 1e-10);
        }
    }
}

#[test]
fn word_algebra() {
    let np = 6;
    let w = ModelWord::tau(2).then_after(&ModelWord::eta(), np);
    assert_eq!(w.to_string(), "τ^2∘η");
    let id = w.then_after(&w.inverse(np), np);
    assert_eq!(id.to_string(), "id");
    assert_eq!(ModelWord::tau(4).then_after(&ModelWord::tau(2), np).to_string(), "id");
}

#[test]
fn teardrop_recovery() {
    let m = model(3, 1, PairingCase::CaseI);
    let r = recover_representation(&m).unwrap();
    assert_eq!(r.generators.len(), 1);
    assert_eq!(r.generators[0].order, Some(2));
    assert_eq!(r.rotation_order, 3);
    assert_eq!(r.relation_orders, vec![2, 3]);
}

#[test]
fn case_two_recovery_has_two_involutions() {
    let m = model(1, 4, PairingCase::CaseII);
    let r = recover_representation(&m).unwrap();
    let involutions: Vec<usize> = r
        .generators
        .iter()
        .filter(|g| g.order == Some(2))
        .map(|g| g.j)
        .collect();
    assert_eq!(involutions, vec![1, 3]);
}

#[test]
fn rotation_word_order() {
    let m = model(4, 1, PairingCase::CaseI);
    assert_eq!(recover_representation(&m).unwrap().rotation_order, 4);
}

#[test]
fn recovery_matches_signature_on_grid() {
    for (n, p, case) in preset_grid(5, 6) {
        let m = model(n, p, case);
        let r = recover_representation(&m).unwrap();
        let g = build_group(n, p, case).unwrap();
        assert_eq!(r.relation_orders, orbifold_signature(&g, n > 1).cone_points);
        for gen in &r.generators {
            assert!(gen.stabilizes_component_one);
            assert!(gen.generator_residual < 1e-12);
        }
    }
}

#[test]
fn tilings_are_disjoint() {
    for (n, p, case) in [
        (3, 1, PairingCase::CaseI),
        (4, 1, PairingCase::CaseI),
        (1, 3, PairingCase::CaseI),
        (1, 4, PairingCase::CaseI),
        (1, 4, PairingCase::CaseII),
    ] {
        let g = build_group(n, p, case).unwrap();
        let r = group_tiling(&g, 3).unwrap();
        assert_eq!(r.overlaps, 0);
        assert_eq!(r.samples_per_tile, TILE_SAMPLES);
    }
}

#[test]
fn tiling_length_zero_is_the_fundamental_domain() {
    let g = build_group(3, 1, PairingCase::CaseI).unwrap();
    let r = group_tiling(&g, 0).unwrap();
    assert_eq!(r.tiles.len(), 1);
    assert_eq!(r.tiles[0].word, "id");
    assert_eq!(
        group_tiling(&g, 9).unwrap_err(),
        CorrespondenceError::LengthLimit(9)
    );
}

#[test]
fn free_square_group_tile_counts() {
    // Γ_{1,4} is free on two generators: 4·3^{k−1} reduced words of length k.
    let g = build_group(1, 4, PairingCase::CaseI).unwrap();
    let r = group_tiling(&g, 3).unwrap();
    assert_eq!(r.tiles.len(), 1 + 4 + 12 + 36);
}

#[test]
fn overlap_check_detects_a_shifted_copy() {
    let g = build_group(3, 1, PairingCase::CaseI).unwrap();
    let domain = FundamentalDomain::new(&g);
    let samples = domain.interior_samples(TILE_SAMPLES);
    assert_eq!(samples.len(), TILE_SAMPLES);
    assert!(samples.iter().all(|&z| domain.contains(z, 1e-9)));
    let r = group_tiling(&g, 2).unwrap();
    let mut tiles = r.tiles.clone();
    let mut extra = tiles[0].clone();
    extra.element = MobiusMap::rotation(0.3);
    tiles.push(extra);
    assert!(tile_overlaps(&domain, &tiles, &samples) > 0);
}

#[test]
fn square_blaschke() {
    let b = BlaschkeProduct::new(vec![C64::new(0.0, 0.0); 2], 0.0).unwrap();
    assert_eq!(b.fixed_point, C64::new(0.0, 0.0));
    assert!((b.eval(C64::new(1.0, 0.0)) - 1.0).norm() < 1e-15);
    let orbit = blaschke_branch(&b, C64::new(0.9, 0.0), 200).unwrap();
    assert!(orbit.converged);
    assert!(orbit.points.last().unwrap().norm() < 1e-12);
}

#[test]
fn blaschke_multiplier_at_the_origin() {
    // B(z) = z(z − 1/2)/(1 − z/2): B′(0) = −1/2.
    let b = BlaschkeProduct::new(vec![C64::new(0.0, 0.0), C64::new(0.5, 0.0)], 0.0).unwrap();
    assert!((b.derivative(C64::new(0.0, 0.0)) - C64::new(-0.5, 0.0)).norm() < 1e-15);
    assert!((b.multiplier - 0.5).abs() < 1e-12);
    // Derivative against a central difference.
    let z = C64::new(0.2, -0.3);
    let h = 1e-6;
    let fd = (b.eval(z + h) - b.eval(z - h)) / (2.0 * h);
    assert!((fd - b.derivative(z)).norm() < 1e-8);
}

#[test]
fn blaschke_circle_degree() {
    for zeros in [
        vec![C64::new(0.0, 0.0), C64::new(0.5, 0.0)],
        vec![C64::new(0.1, 0.2), C64::new(-0.3, 0.1), C64::new(0.0, -0.4)],
    ] {
        let b = BlaschkeProduct::new(zeros.clone(), 0.7).unwrap();
        assert_eq!(b.circle_winding(64), zeros.len() as i64);
    }
}

#[test]
fn non_hyperbolic_blaschke_is_rejected() {
    // An irrational rotation fixes 0 with multiplier of modulus 1.
    let err = BlaschkeProduct::new(vec![C64::new(0.0, 0.0)], 1.0).unwrap_err();
    assert!(matches!(err, CorrespondenceError::NotHyperbolic { .. }), "{err:?}");
    // z ↦ (z + a)/(1 + a z) with real a fixes ±1 and nothing inside.
    let err = BlaschkeProduct::new(vec![C64::new(-0.5, 0.0)], 0.0).unwrap_err();
    assert!(matches!(err, CorrespondenceError::NotHyperbolic { .. }), "{err:?}");
    assert!(matches!(
        BlaschkeProduct::new(vec![C64::new(1.0, 0.0)], 0.0),
        Err(CorrespondenceError::ZeroOutsideDisk(_))
    ));
}

#[test]
fn blaschke_orbits_converge() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let b = BlaschkeProduct::new(vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.4)], 1.1).unwrap();
    for _ in 0..200 {
        let z = C64::from_polar(0.999 * rng.gen::<f64>().sqrt(), TAU * rng.gen::<f64>());
        let orbit = blaschke_branch(&b, z, 1000).unwrap();
        assert!(orbit.converged, "{z}");
    }
}

proptest! {
    #[test]
    fn r_model_is_tau_invariant(re in -0.7f64..0.7, im in -0.7f64..0.7, j in 1usize..4, n in 1usize..6) {
        let m = model(n, 3, PairingCase::CaseI);
        let z = ModelPoint::new(C64::new(re, im), j);
        let t = m.tau(z);
        prop_assert!((m.r_model(t) - m.r_model(z)).norm() < 1e-14);
    }
}
