use proptest::prelude::*;
use wehrl_core::ensemble::{haar_random_state, sample_rng};
use wehrl_core::entropy::{moment_exact, wehrl_entropy};
use wehrl_core::maps::{f1, f1_prime_collapse, f2, f3, has_linear_phases, lemma1_check, rotation_scan_x, theorem2_driver};
use wehrl_core::{Complex64, PureState, Rotation, SpherePoint, TwiceJ};

fn random_state(twice_j: u32, seed: u64) -> PureState {
    haar_random_state(TwiceJ::new(twice_j), &mut sample_rng(seed, 0))
}

/// |f_k| e^{i(c + αk)} from a random modulus profile.
fn pattern_state(twice_j: u32, seed: u64, c: f64, alpha: f64) -> PureState {
    let base = random_state(twice_j, seed);
    let coeffs = base
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, f)| Complex64::from_polar(f.norm(), c + alpha * k as f64))
        .collect();
    PureState::from_coefficients(TwiceJ::new(twice_j), coeffs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn f2_never_lowers_moments(tj in 1u32..10, seed in any::<u64>(), q in 2u32..=4) {
        let r = lemma1_check(&random_state(tj, seed), q).unwrap();
        prop_assert!(r.inequality_holds, "{r:?}");
    }

    #[test]
    fn generic_states_increase_strictly(tj in 2u32..10, seed in any::<u64>(), q in 2u32..=3) {
        let r = lemma1_check(&random_state(tj, seed), q).unwrap();
        prop_assert!(!r.equality_case_detected);
        prop_assert!(r.w_after > r.w_before + 1e-12, "{r:?}");
    }

    #[test]
    fn pattern_states_are_equality_cases(tj in 1u32..10, seed in any::<u64>(), c in 0.0..6.3f64, alpha in -3.2..3.2f64, q in 2u32..=3) {
        let r = lemma1_check(&pattern_state(tj, seed, c, alpha), q).unwrap();
        prop_assert!(r.equality_case_detected && r.moments_equal, "{r:?}");
    }

    #[test]
    fn scan_rotation_keeps_moments(tj in 1u32..10, seed in any::<u64>()) {
        let s = f2(&random_state(tj, seed));
        let scan = rotation_scan_x(&s).unwrap();
        for q in 2..=4 {
            prop_assert!((moment_exact(&s, q).unwrap() - moment_exact(&scan.rotated, q).unwrap()).abs() < 1e-10);
        }
        prop_assert!(scan.df0_dx.abs() < 1e-9 && scan.f1_rotated.abs() < 1e-9, "{} {}", scan.df0_dx, scan.f1_rotated);
    }
}

#[test]
fn sparse_support_defeats_the_phase_pattern_test() {
    // nonzero at k = 0, 1, 3: no two index pairs share a sum, so q = 2 is blind to phases
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let s = PureState::from_coefficients(TwiceJ::new(3), vec![c(0.5, 0.0), c(0.0, 0.6), c(0.0, 0.0), c(-0.3, 0.2)]).unwrap();
    let r2 = lemma1_check(&s, 2).unwrap();
    assert!(!r2.equality_case_detected && r2.moments_equal);
    let r3 = lemma1_check(&s, 3).unwrap();
    assert!(r3.w_after > r3.w_before + 1e-6);
}

#[test]
fn scan_moves_real_coherent_state_to_north() {
    for &x in &[0.0, 0.3, 1.0, 4.5] {
        let s = wehrl_core::spin::coherent_state(SpherePoint::finite(Complex64::new(x, 0.0)), TwiceJ::new(5));
        let scan = rotation_scan_x(&s).unwrap();
        assert!((scan.x_max - x).abs() < 1e-12, "{x}: {}", scan.x_max);
        assert!(scan.rotated.is_coherent() && scan.rotated.husimi(SpherePoint::NORTH) > 1.0 - 1e-12);
    }
}

#[test]
fn theorem2_reaches_coherent_moment() {
    let mut worst: f64 = 0.0;
    for i in 0..50u64 {
        let tj = 1 + (i % 8) as u32;
        let s = random_state(tj, 500 + i);
        let trace = theorem2_driver(&s, 2, 200).unwrap();
        let ws: Vec<f64> = trace.snapshots.iter().map(|x| x.report.rows[0].w.unwrap()).collect();
        assert!(ws.windows(2).all(|w| w[1] > w[0]), "non-monotone trace {ws:?}");
        let target = (tj as f64 + 1.0) / (2.0 * tj as f64 + 1.0);
        worst = worst.max((ws.last().unwrap() - target).abs());
        assert!(trace.converged, "2j={tj}: {ws:?}");
    }
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn theorem2_cubic_moment() {
    let s = random_state(4, 9);
    let trace = theorem2_driver(&s, 3, 200).unwrap();
    let target = 5.0 / 13.0;
    assert!((trace.last().report.rows[0].w.unwrap() - target).abs() < 1e-6);
}

#[test]
fn coherent_moment_dominates_samples() {
    for i in 0..200u64 {
        let tj = 1 + (i % 10) as u32;
        let s = random_state(tj, i);
        for q in [2u32, 3] {
            let coh = (tj as f64 + 1.0) / (q as f64 * tj as f64 + 1.0);
            assert!(moment_exact(&s, q).unwrap() <= coh + 1e-12);
        }
    }
}

#[test]
fn f1_prime_collapses_random_states() {
    for i in 0..10u64 {
        let s = random_state(6, 40 + i);
        let out = f1_prime_collapse(&s);
        assert!(out.is_coherent(), "deficit {}", out.coherence_deficit());
        assert!((wehrl_entropy(&out).unwrap() - 6.0 / 7.0).abs() < 1e-8);
    }
}

#[test]
fn f1_output_roots_on_meridian() {
    for i in 0..20u64 {
        let out = f1(&random_state(5, 60 + i));
        for p in wehrl_core::spin::roots_from_state(&out).points() {
            if let Some(g) = p.gamma() {
                assert!(g.im.abs() < 1e-6 * (1.0 + g.norm()) && g.re >= -1e-6, "{g}");
            }
        }
    }
}

#[test]
fn f3_full_step_is_coherent_and_rotation_covariant() {
    let r = Rotation::new(Complex64::new(0.3, -0.8), 1.0);
    for i in 0..10u64 {
        let s = random_state(4, 80 + i);
        let Ok(out) = f3(&s, 1.0) else { continue };
        assert!(out.is_coherent());
        let a = r.apply_state(&f3(&s, 0.4).unwrap());
        let b = f3(&r.apply_state(&s), 0.4).unwrap();
        assert!(a.phase_distance(&b) < 1e-7, "{}", a.phase_distance(&b));
    }
}

/// F1 and F3 are only candidates; record how often they lower the Wehrl entropy.
#[test]
fn conjectural_reducers_are_recorded() {
    let mut f1_violations = 0;
    let mut f3_violations = 0;
    let n = 20;
    for i in 0..n {
        let s = random_state(4, 900 + i);
        let before = wehrl_entropy(&s).unwrap();
        if wehrl_entropy(&f1(&s)).unwrap() > before + 1e-10 {
            f1_violations += 1;
        }
        if let Ok(out) = f3(&s, 0.5) {
            if wehrl_entropy(&out).unwrap() > before + 1e-10 {
                f3_violations += 1;
            }
        }
    }
    println!("F1 raised S in {f1_violations}/{n} samples, F3(0.5) in {f3_violations}/{n}");
}

#[test]
fn phase_pattern_detector() {
    assert!(has_linear_phases(&pattern_state(6, 3, 0.4, 2.9)));
    assert!(!has_linear_phases(&random_state(6, 3)));
}
