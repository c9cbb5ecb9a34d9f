use wehrl_core::ensemble::{
    expected_moment, expected_wehrl, haar_random_state, ks_critical_1pct, ks_statistic, l2_squared_coherent,
    l2_squared_random, l2_to_uniform, l2_to_uniform_quadrature, mc_mean_measure, sample_rng, McEstimate, Measure,
};
use wehrl_core::entropy::renyi_entropy;
use wehrl_core::spin::{amplitudes_from_state, coherent_state};
use wehrl_core::{Complex64, Rotation, SpherePoint, TwiceJ};

#[test]
fn amplitude_weights_average_to_one_over_n() {
    let tj = TwiceJ::new(4);
    let n = 10_000;
    let mut sums = vec![Vec::with_capacity(n); tj.dim()];
    for i in 0..n as u64 {
        let a = amplitudes_from_state(&haar_random_state(tj, &mut sample_rng(2024, i)));
        for (m, z) in a.iter().enumerate() {
            sums[m].push(z.norm_sqr());
        }
    }
    for col in &sums {
        let est = McEstimate::from_samples(col, 2024).unwrap();
        // Dirichlet(1,…,1): mean 1/N
        assert!(est.z_score(0.2).abs() < 3.0, "{est:?}");
    }
}

#[test]
fn mc_moments_match_exact() {
    for n in [3u32, 5, 9] {
        for q in [2.0, 3.0] {
            let est = mc_mean_measure(TwiceJ::new(n - 1), q, Measure::Moment, 10_000, 17).unwrap();
            let exact = expected_moment(n as u64, q).unwrap();
            assert!(est.z_score(exact).abs() < 3.0, "N={n} q={q}: {est:?} vs {exact}");
        }
    }
}

#[test]
fn mc_wehrl_matches_harmonic_sum() {
    let est = mc_mean_measure(TwiceJ::new(4), 1.0, Measure::Entropy, 2_000, 23).unwrap();
    let exact = expected_wehrl(5).unwrap();
    assert!((exact - 77.0 / 60.0).abs() < 1e-15);
    assert!(est.z_score(exact).abs() < 3.0, "{est:?}");
}

#[test]
fn rotation_leaves_entropy_distribution_unchanged() {
    let tj = TwiceJ::new(4);
    let r = Rotation::new(Complex64::new(0.7, -1.2), 0.4);
    let n = 1000;
    let plain: Vec<f64> = (0..n).map(|i| renyi_entropy(&haar_random_state(tj, &mut sample_rng(31, i)), 2.0).unwrap()).collect();
    let rotated: Vec<f64> = (0..n)
        .map(|i| renyi_entropy(&r.apply_state(&haar_random_state(tj, &mut sample_rng(32, i))), 2.0).unwrap())
        .collect();
    let d = ks_statistic(&plain, &rotated);
    assert!(d < ks_critical_1pct(plain.len(), rotated.len()), "KS {d}");
}

#[test]
fn random_l2_average() {
    for tj in [2u32, 8, 32] {
        let twice_j = TwiceJ::new(tj);
        let samples: Vec<f64> = (0..10_000).map(|i| l2_to_uniform(&haar_random_state(twice_j, &mut sample_rng(41, i))).powi(2)).collect();
        let est = McEstimate::from_samples(&samples, 41).unwrap();
        assert!(est.z_score(l2_squared_random(twice_j)).abs() < 3.0, "2j={tj}: {est:?}");
    }
}

#[test]
fn coherent_l2_closed_form() {
    for tj in [1u32, 2, 7, 50, 200] {
        let twice_j = TwiceJ::new(tj);
        let s = coherent_state(SpherePoint::finite(Complex64::new(-0.4, 0.9)), twice_j);
        let closed = l2_squared_coherent(twice_j);
        assert!((l2_to_uniform(&s).powi(2) - closed).abs() < 1e-13);
        if tj <= 50 {
            assert!((l2_to_uniform_quadrature(&s).powi(2) - closed).abs() < 1e-10);
        }
    }
    // the large-spin limit is 1/2
    assert!((l2_squared_coherent(TwiceJ::new(1_000_000)) - 0.5).abs() < 1e-6);
}

#[test]
fn l2_quadrature_agrees_on_random_states() {
    for i in 0..20 {
        let s = haar_random_state(TwiceJ::new(1 + (i % 12) as u32), &mut sample_rng(55, i));
        assert!((l2_to_uniform(&s) - l2_to_uniform_quadrature(&s)).abs() < 1e-9);
    }
}
