use std::f64::consts::TAU;

use fracphase::evolution::{
    discrete_geometric_phases, evolve, phase_trace, random_geodesic_path, vn_path, wrap_angle, Linear,
};
use fracphase::matcore::{expm_iherm, polar_decompose, ComplexMatrix, C64};
use fracphase::qstate::{concurrence, det_invariant, invariant, invariant_of, polar_sectors, q_spectrum, Subsystem};
use fracphase::random::{
    random_hermitian, random_invertible_state, random_state, random_su, random_unitary, trial_rng,
};
use fracphase::sud::{adjoint_rep, generators};
use fracphase::topology::{check_cyclic, homotopy_class, unwrap_phase_trace, CYCLIC_TOL};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn rng(seed: u64) -> rand_chacha::ChaCha20Rng {
    trial_rng(seed, 0)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn exponential_is_a_unitary_group(seed in any::<u64>(), d in 2usize..=6, s in -3.0..3.0f64, t in -3.0..3.0f64) {
        let h = random_hermitian(&mut rng(seed), d);
        let us = expm_iherm(&h, s).unwrap();
        let ut = expm_iherm(&h, t).unwrap();
        prop_assert!(us.unitarity_defect() <= 1e-10);
        prop_assert!((&us * &ut).distance(&expm_iherm(&h, s + t).unwrap()) <= 1e-10);
        let want = C64::from_polar(1.0, s * h.trace().re);
        prop_assert!((us.det() - want).norm() <= 1e-10);
    }

    #[test]
    fn polar_factors_rebuild(seed in any::<u64>(), d in 2usize..=6) {
        let mut r = rng(seed);
        let a = random_invertible_state(&mut r, d, 1e-6);
        let p = polar_decompose(a.alpha()).unwrap();
        prop_assert!((&p.q * &p.s).distance(a.alpha()) <= 1e-10);
        prop_assert!(p.s.unitarity_defect() <= 1e-10);
    }

    #[test]
    fn generator_basis_is_orthonormal(d in 2usize..=8) {
        let basis = generators(d).unwrap();
        prop_assert_eq!(basis.len(), d * d - 1);
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                let want = if a == b { 0.5 } else { 0.0 };
                prop_assert!((basis.get(a).inner(basis.get(b)) - C64::new(want, 0.0)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn adjoint_map_is_a_rotation_homomorphism(seed in any::<u64>(), d in 2usize..=4, n in 0usize..4) {
        let mut r = rng(seed);
        let basis = generators(d).unwrap();
        let (s1, s2) = (random_su(&mut r, d), random_su(&mut r, d));
        let r1 = adjoint_rep(&s1, &basis).unwrap();
        let r2 = adjoint_rep(&s2, &basis).unwrap();
        let r12 = adjoint_rep(&(&s1 * &s2), &basis).unwrap();
        prop_assert!(r12.distance(&(&r1 * &r2)) <= 1e-10);
        let centre = C64::from_polar(1.0, TAU * n as f64 / d as f64);
        prop_assert!(adjoint_rep(&s1.scale(centre), &basis).unwrap().distance(&r1) <= 1e-12);
        let gram = &r1.transpose() * &r1;
        prop_assert!(gram.distance(&fracphase::matcore::RealMatrix::identity(basis.len())) <= 1e-10);
        prop_assert!((r1.det() - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn local_unitaries_preserve_invariants(seed in any::<u64>(), d in 2usize..=4) {
        let mut r = rng(seed);
        let state = random_state(&mut r, d);
        let moved = state.apply_local(&random_unitary(&mut r, d), &random_unitary(&mut r, d)).unwrap();
        for p in 1..=d {
            prop_assert!((invariant(&state, p).unwrap() - invariant(&moved, p).unwrap()).abs() <= 1e-10);
            let a = invariant_of(&moved, Subsystem::A, p).unwrap();
            let b = invariant_of(&moved, Subsystem::B, p).unwrap();
            prop_assert!((a - b).abs() <= 1e-10);
        }
        prop_assert!((concurrence(&state) - concurrence(&moved)).abs() <= 1e-10);
        prop_assert!((det_invariant(&state) - det_invariant(&moved)).abs() <= 1e-10);
        let (q0, q1) = (q_spectrum(&state).unwrap(), q_spectrum(&moved).unwrap());
        for (x, y) in q0.iter().zip(&q1) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn fresh_phase_sector_is_canonical(seed in any::<u64>(), d in 2usize..=5) {
        let state = random_invertible_state(&mut rng(seed), d, 1e-6);
        let s = polar_sectors(&state).unwrap();
        prop_assert!(s.phi >= 0.0 && s.phi < TAU / d as f64);
        prop_assert!((s.sbar.det() - C64::new(1.0, 0.0)).norm() <= 1e-10);
    }

    #[test]
    fn adjoint_image_closes_on_centre_loops(seed in any::<u64>(), d in 2usize..=5) {
        let basis = generators(d).unwrap();
        let w = random_su(&mut rng(seed), d);
        let start = adjoint_rep(&w, &basis).unwrap();
        let end = w.scale(C64::from_polar(1.0, TAU / d as f64));
        prop_assert!(adjoint_rep(&end, &basis).unwrap().distance(&start) <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn discrete_estimator_agrees(seed in any::<u64>(), d in 2usize..=3) {
        let mut r = rng(seed);
        let state = random_state(&mut r, d);
        let path = random_geodesic_path(&mut r, d, 2, 1.5, 1.0, 4001).unwrap();
        let trace = phase_trace(&state, &path).unwrap();
        let discrete = discrete_geometric_phases(&state, &path).unwrap();
        for (s, g) in trace.samples.iter().zip(&discrete) {
            if let (Some(g), true) = (g, s.overlap.norm() >= 1e-3) {
                prop_assert!(wrap_angle(g - s.phi_g).abs() <= 1e-6, "t={} {} vs {}", s.t, g, s.phi_g);
            }
        }
    }

    #[test]
    fn unwrapping_is_idempotent(seed in any::<u64>(), d in 2usize..=3) {
        let mut r = rng(seed);
        let state = random_state(&mut r, d);
        let path = random_geodesic_path(&mut r, d, 3, 3.0, 1.0, 401).unwrap();
        let trace = phase_trace(&state, &path).unwrap();
        let (again, _) = unwrap_phase_trace(&trace).unwrap();
        for (x, y) in trace.samples.iter().zip(&again.samples) {
            prop_assert_eq!(x.phi_g_unwrapped, y.phi_g_unwrapped);
        }
    }

    #[test]
    fn cycle_classes_add(seed in any::<u64>(), d in 2usize..=5, k1 in 1usize..5, k2 in 1usize..5) {
        let state = random_invertible_state(&mut rng(seed), d, 1e-6);
        let cycle = vn_path(d, Linear::new(0.0, TAU, 1.0), 1.0, 101).unwrap();
        let class_of = |path: &fracphase::evolution::UnitaryPath| {
            let end = evolve(&state, path, path.len() - 1).unwrap();
            check_cyclic(&state, &end, CYCLIC_TOL).unwrap().class_n.unwrap()
        };
        let (p1, p2) = (cycle.repeat(k1).unwrap(), cycle.repeat(k2).unwrap());
        let joined = p1.concat(&p2).unwrap();
        prop_assert_eq!(class_of(&joined), (class_of(&p1) + class_of(&p2)) % d);
        prop_assert_eq!(homotopy_class(TAU * (k1 + k2) as f64 / d as f64, d).unwrap(), (k1 + k2) % d);
    }
}

#[test]
fn identity_matrix_is_fixed_by_adjoint() {
    let basis = generators(3).unwrap();
    let r = adjoint_rep(&ComplexMatrix::identity(3), &basis).unwrap();
    assert!(r.distance(&fracphase::matcore::RealMatrix::identity(8)) <= 1e-12);
}
