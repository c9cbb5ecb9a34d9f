use proptest::prelude::*;
use wehrl_core::ensemble::{haar_random_state, sample_rng};
use wehrl_core::quadrature::QuadratureGrid;
use wehrl_core::spin::{
    amplitudes_from_state, coherent_state, roots_from_state, state_from_amplitudes, state_from_roots,
};
use wehrl_core::{Complex64, PureState, Rotation, SpherePoint, TwiceJ};

fn random_state(twice_j: u32, seed: u64) -> PureState {
    haar_random_state(TwiceJ::new(twice_j), &mut sample_rng(seed, 0))
}

fn norm(state: &PureState) -> f64 {
    let tj = state.twice_j().get() as u64;
    state
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, f)| f.norm_sqr() / wehrl_core::special::binomial(tj, k as u64))
        .sum()
}

fn point() -> impl Strategy<Value = SpherePoint> {
    prop_oneof![
        9 => (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(|(t, p)| SpherePoint::from_polar(t, p)),
        1 => Just(SpherePoint::Infinity),
    ]
}

fn rotation() -> impl Strategy<Value = Rotation> {
    (-3.0..3.0f64, -3.0..3.0f64, 0.0..std::f64::consts::TAU)
        .prop_map(|(re, im, phi)| Rotation::new(Complex64::new(re, im), phi))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn husimi_is_bounded(tj in 0u32..24, seed in any::<u64>(), p in point()) {
        let s = random_state(tj, seed);
        let h = s.husimi(p);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&h), "{h}");
    }

    #[test]
    fn constructors_normalize(tj in 0u32..40, seed in any::<u64>(), p in point()) {
        prop_assert!((norm(&random_state(tj, seed)) - 1.0).abs() < 1e-12);
        prop_assert!((norm(&coherent_state(p, TwiceJ::new(tj))) - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn coefficient_bound(tj in 0u32..30, seed in any::<u64>()) {
        let s = random_state(tj, seed);
        for (k, f) in s.coeffs().iter().enumerate() {
            prop_assert!(f.norm_sqr() <= wehrl_core::special::binomial(tj as u64, k as u64) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn husimi_integrates_to_one_over_n(tj in 0u32..16, seed in any::<u64>()) {
        let s = random_state(tj, seed);
        let grid = QuadratureGrid::for_order(s.twice_j(), 1);
        let total = s.dim() as f64 * grid.integrate(|u, p| s.husimi_polar(u, p));
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn husimi_vanishes_at_roots(tj in 1u32..12, seed in any::<u64>()) {
        let s = random_state(tj, seed);
        for p in roots_from_state(&s).points() {
            prop_assert!(s.husimi(p) < 1e-10, "{}", s.husimi(p));
        }
    }

    #[test]
    fn stellar_round_trip(tj in 0u32..16, seed in any::<u64>()) {
        let s = random_state(tj, seed);
        let back = state_from_roots(&roots_from_state(&s)).unwrap();
        prop_assert!(back.phase_distance(&s) < 1e-9, "{}", back.phase_distance(&s));
    }

    #[test]
    fn amplitude_round_trip(tj in 0u32..30, seed in any::<u64>()) {
        let s = random_state(tj, seed);
        let a = amplitudes_from_state(&s);
        let n2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((n2 - 1.0).abs() < 1e-14);
        let back = amplitudes_from_state(&state_from_amplitudes(s.twice_j(), &a).unwrap());
        let dev = a.iter().zip(&back).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-14, "{dev}");
    }

    #[test]
    fn rotation_group_action(tj in 0u32..12, seed in any::<u64>(), r1 in rotation(), r2 in rotation()) {
        let s = random_state(tj, seed);
        let stepwise = r2.apply_state(&r1.apply_state(&s));
        let composed = r2.compose(&r1).apply_state(&s);
        prop_assert!(stepwise.phase_distance(&composed) < 1e-10);
    }

    #[test]
    fn rotation_moves_roots(tj in 1u32..8, seed in any::<u64>(), r in rotation()) {
        let s = random_state(tj, seed);
        let rotated = r.apply_state(&s);
        for p in roots_from_state(&s).points() {
            prop_assert!(rotated.husimi(r.apply_point(p)) < 1e-9);
        }
    }

    #[test]
    fn rotation_matrix_is_special_unitary(r in rotation()) {
        let m = r.matrix();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        prop_assert!((det - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let col = m[0][0].norm_sqr() + m[1][0].norm_sqr();
        let cross = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
        prop_assert!((col - 1.0).abs() < 1e-12 && cross.norm() < 1e-12);
    }

    #[test]
    fn scalar_product_by_quadrature(tj in 0u32..10, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_state(tj, s1);
        let b = random_state(tj, s2);
        let grid = QuadratureGrid::for_order(a.twice_j(), 1);
        let n = a.dim() as f64;
        // N ∫ ψ_a(γ) conj(ψ_b(γ)) / 𝒦(γ) dμ
        let mut re = 0.0;
        let mut im = 0.0;
        for (u, phi, w) in grid.nodes() {
            let g = SpherePoint::from_polar(u.acos(), phi);
            let gamma = match g.gamma() {
                Some(x) => x,
                None => continue,
            };
            let k = (1.0 + gamma.norm_sqr()).powi(tj as i32);
            let v = a.bargmann(gamma) * b.bargmann(gamma).conj() / k;
            re += w * v.re;
            im += w * v.im;
        }
        let quad = Complex64::new(re, im) * n;
        prop_assert!((quad - a.inner(&b)).norm() < 1e-11, "{quad} vs {}", a.inner(&b));
    }
}

#[test]
fn coherent_state_peaks_at_its_centre() {
    for tj in [1u32, 5, 20, 200] {
        for &g in &[Complex64::new(0.0, 0.0), Complex64::new(0.3, -2.0), Complex64::new(1e3, 1.0)] {
            let p = SpherePoint::finite(g);
            let h = coherent_state(p, TwiceJ::new(tj)).husimi(p);
            assert!((h - 1.0).abs() < 1e-10, "2j={tj} γ={g}: {h}");
        }
    }
}

#[test]
fn rotating_north_gives_coherent_state() {
    let alpha = Complex64::new(0.4, 1.7);
    let north = coherent_state(SpherePoint::NORTH, TwiceJ::new(6));
    let rotated = Rotation::new(alpha, 0.0).apply_state(&north);
    let target = coherent_state(SpherePoint::finite(alpha), TwiceJ::new(6));
    assert!(rotated.phase_distance(&target) < 1e-12);
}
