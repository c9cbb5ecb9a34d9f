//! Haar-random pure states and their ensemble averages.

use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::entropy::{integer_order, moment_adaptive, moment_exact, renyi_entropy, wehrl_entropy_lines};
use crate::error::{Error, Result};
use crate::prelude::*;
use crate::quadrature::{Cubature, QuadratureGrid};
use crate::special::{harmonic_from_two, ln_gamma};
use crate::spin::{state_from_amplitudes, PureState, TwiceJ};

/// Relative tolerance of the cubature used for per-sample entropies.
pub const MC_TOLERANCE: f64 = 1e-9;

/// Normalized vector of independent complex Gaussians, i.e. a column of a Haar unitary.
pub fn haar_random_state<R: Rng + ?Sized>(twice_j: TwiceJ, rng: &mut R) -> PureState {
    loop {
        let amps: Vec<Complex64> = (0..twice_j.dim())
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        if let Ok(s) = state_from_amplitudes(twice_j, &amps) {
            return s;
        }
    }
}

/// Generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn check_dim(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::param("ensemble averages need N ≥ 2"));
    }
    Ok(())
}

/// ⟨W^(q)⟩ = N Γ(N) Γ(q+1) / Γ(q+N).
pub fn expected_moment(n: u64, q: f64) -> Result<f64> {
    check_dim(n)?;
    if q.is_nan() || q <= 0.0 {
        return Err(Error::InvalidOrder(q));
    }
    let n = n as f64;
    Ok((n.ln() + ln_gamma(n) + ln_gamma(q + 1.0) - ln_gamma(q + n)).exp())
}

/// ⟨S^(q)⟩ = ln[Γ(N+1) Γ(q+1) / Γ(q+N)] / (1 − q); the Wehrl mean at q = 1.
pub fn expected_renyi(n: u64, q: f64) -> Result<f64> {
    check_dim(n)?;
    if q.is_nan() || q <= 0.0 {
        return Err(Error::InvalidOrder(q));
    }
    if q == 1.0 {
        return expected_wehrl(n);
    }
    let ln_w = if n <= 1_000_000 {
        let d = q - 1.0;
        -crate::entropy::neumaier_sum((2..=n).map(|k| libm::log1p(d / k as f64)))
    } else {
        let nf = n as f64;
        ln_gamma(nf + 1.0) + ln_gamma(q + 1.0) - ln_gamma(q + nf)
    };
    Ok(ln_w / (1.0 - q))
}

/// ⟨S⟩ = Ψ(N+1) − Ψ(2) = Σ_{n=2}^N 1/n.
pub fn expected_wehrl(n: u64) -> Result<f64> {
    check_dim(n)?;
    Ok(harmonic_from_two(n))
}

/// Which quantity a Monte-Carlo run averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    Moment,
    Entropy,
}

impl Measure {
    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Moment => "moment",
            Measure::Entropy => "entropy",
        }
    }

    /// Exact ensemble average.
    pub fn expected(self, n: u64, q: f64) -> Result<f64> {
        match self {
            Measure::Moment => expected_moment(n, q),
            Measure::Entropy => expected_renyi(n, q),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// W^(q) or S^(q) of one state: exact for integer q, cubature otherwise.
pub fn state_measure(state: &PureState, q: f64, measure: Measure) -> Result<f64> {
    let cub = Cubature::with_tolerance(MC_TOLERANCE);
    match (measure, integer_order(q)) {
        (Measure::Moment, Some(k)) => moment_exact(state, k),
        (Measure::Moment, None) => Ok(moment_adaptive(state, q, &cub)?.value),
        (Measure::Entropy, Some(1)) => Ok(wehrl_entropy_lines(state, &cub)?.value),
        (Measure::Entropy, Some(_)) => renyi_entropy(state, q),
        (Measure::Entropy, None) => Ok(moment_adaptive(state, q, &cub)?.value.ln() / (1.0 - q)),
    }
}

/// Measure of the `index`-th random state of a run.
pub fn sample_measure(twice_j: TwiceJ, q: f64, measure: Measure, seed: u64, index: u64) -> Result<f64> {
    let state = haar_random_state(twice_j, &mut sample_rng(seed, index));
    state_measure(&state, q, measure)
}

/// Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// Mean and standard error sample_std/√n, with compensated sums.
    pub fn from_samples(samples: &[f64], seed: u64) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::param("need at least two samples"));
        }
        let mean = crate::entropy::neumaier_sum(samples.iter().copied()) / n as f64;
        let ss = crate::entropy::neumaier_sum(samples.iter().map(|x| (x - mean) * (x - mean)));
        let std = (ss / (n - 1) as f64).sqrt();
        Ok(Self { mean, std_error: std / (n as f64).sqrt(), n_samples: n, seed })
    }

    /// (mean − exact)/std_error; zero when both the spread and the deviation vanish.
    pub fn z_score(&self, exact: f64) -> f64 {
        let d = self.mean - exact;
        if self.std_error == 0.0 {
            if d.abs() <= 1e-12 * exact.abs().max(1.0) {
                0.0
            } else {
                f64::INFINITY.copysign(d)
            }
        } else {
            d / self.std_error
        }
    }
}

/// Sequential Monte-Carlo mean of W^(q) or S^(q) over Haar-random states.
pub fn mc_mean_measure(twice_j: TwiceJ, q: f64, measure: Measure, n_samples: usize, seed: u64) -> Result<McEstimate> {
    if n_samples < 100 {
        return Err(Error::param("n_samples must be at least 100"));
    }
    let samples = (0..n_samples as u64)
        .map(|i| sample_measure(twice_j, q, measure, seed, i))
        .collect::<Result<Vec<f64>>>()?;
    McEstimate::from_samples(&samples, seed)
}

/// L2 distance between ℋ and the uniform density, from L2² = 1/R − 1/N.
pub fn l2_to_uniform(state: &PureState) -> f64 {
    let w2 = moment_exact(state, 2).expect("q = 2 is valid");
    (w2 - 1.0 / state.dim() as f64).max(0.0).sqrt()
}

/// Same distance from N ∫ (ℋ − 1/N)² dμ on an exact product grid.
pub fn l2_to_uniform_quadrature(state: &PureState) -> f64 {
    let n = state.dim() as f64;
    let grid = QuadratureGrid::for_order(state.twice_j(), 2);
    let d2 = n * grid.integrate(|u, phi| {
        let h = state.husimi_polar(u, phi) - 1.0 / n;
        h * h
    });
    d2.max(0.0).sqrt()
}

/// L2² of a coherent state, 1/R_coh − 1/N = 4j²/((4j+1)(2j+1)).
pub fn l2_squared_coherent(twice_j: TwiceJ) -> f64 {
    let t = twice_j.get() as f64;
    t * t / ((2.0 * t + 1.0) * (t + 1.0))
}

/// Ensemble average of L2², 2j/((2j+1)(2j+2)).
pub fn l2_squared_random(twice_j: TwiceJ) -> f64 {
    let t = twice_j.get() as f64;
    t / ((t + 1.0) * (t + 2.0))
}

/// Two-sample Kolmogorov–Smirnov statistic sup |F_a − F_b|.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut k, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && k < b.len() {
        let x = if a[i] <= b[k] { a[i] } else { b[k] };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while k < b.len() && b[k] <= x {
            k += 1;
        }
        d = d.max((i as f64 / na - k as f64 / nb).abs());
    }
    d
}

/// Asymptotic 1% critical value of the two-sample KS statistic.
pub fn ks_critical_1pct(na: usize, nb: usize) -> f64 {
    let (na, nb) = (na as f64, nb as f64);
    1.628 * ((na + nb) / (na * nb)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{coherent_state, SpherePoint};

    #[test]
    fn expected_values() {
        assert!((expected_moment(3, 3.0).unwrap() - 0.3).abs() < 1e-14);
        assert!((expected_moment(7, 2.0).unwrap() - 0.25).abs() < 1e-14);
        assert!((expected_moment(7, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((expected_wehrl(3).unwrap() - 5.0 / 6.0).abs() < 1e-15);
        assert!((expected_wehrl(2).unwrap() - 0.5).abs() < 1e-15);
        for n in [2u64, 5, 40] {
            let lo = expected_renyi(n, 1.0 - 1e-6).unwrap();
            let hi = expected_renyi(n, 1.0 + 1e-6).unwrap();
            assert!((0.5 * (lo + hi) - expected_wehrl(n).unwrap()).abs() < 1e-9);
        }
        let big = 100_000u64;
        let asym = (big as f64).ln() + crate::special::EULER_GAMMA - 1.0;
        assert!((expected_wehrl(big).unwrap() - asym).abs() < 1e-4);
        assert!(expected_moment(1, 2.0).is_err());
    }

    #[test]
    fn reproducible_and_spin_half_coherent() {
        let a = haar_random_state(TwiceJ::new(4), &mut sample_rng(7, 3));
        let b = haar_random_state(TwiceJ::new(4), &mut sample_rng(7, 3));
        assert_eq!(a, b);
        for i in 0..20 {
            assert!(haar_random_state(TwiceJ::new(1), &mut sample_rng(1, i)).is_coherent());
        }
    }

    #[test]
    fn l2_paths_agree() {
        let s = haar_random_state(TwiceJ::new(6), &mut sample_rng(11, 0));
        assert!((l2_to_uniform(&s) - l2_to_uniform_quadrature(&s)).abs() < 1e-9);
        let c = coherent_state(SpherePoint::finite(Complex64::new(0.2, 1.3)), TwiceJ::new(9));
        assert!((l2_to_uniform(&c).powi(2) - l2_squared_coherent(TwiceJ::new(9))).abs() < 1e-14);
    }

    #[test]
    fn ks_identical_and_shifted() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert_eq!(ks_statistic(&a, &a), 0.0);
        let b: Vec<f64> = a.iter().map(|x| x + 50.0).collect();
        assert!((ks_statistic(&a, &b) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mc_small() {
        let est = mc_mean_measure(TwiceJ::new(2), 2.0, Measure::Moment, 2000, 5).unwrap();
        assert!(est.z_score(0.5).abs() < 3.0, "{est:?}");
        let coh = mc_mean_measure(TwiceJ::new(1), 3.0, Measure::Moment, 100, 5).unwrap();
        assert!(coh.std_error < 1e-14 && (coh.mean - 0.5).abs() < 1e-14);
    }
}
