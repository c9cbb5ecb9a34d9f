//! The acceptance suite: twelve numerical checks of the closed-form results.

use std::time::Instant;

use serde::Serialize;
use wehrl_core::dynamics::{entropy_time_series, extremality_report, Propagator, SpinHamiltonian};
use wehrl_core::ensemble::{expected_moment, expected_wehrl, haar_random_state, l2_squared_random, l2_to_uniform, sample_rng, Measure};
use wehrl_core::entropy::{
    coherent_closed_forms, dual_entropy, jz_closed_forms, measure_report, moment_exact, moment_quadrature, renyi_entropy,
    s_from_y_series, z_from_w_series, MeasureReport,
};
use wehrl_core::maps::{lemma1_check, theorem2_driver};
use wehrl_core::quadrature::QuadratureGrid;
use wehrl_core::spin::{basis_state, coherent_state};
use wehrl_core::special::EULER_GAMMA;
use wehrl_core::{Complex64, PureState, Result, Rotation, SpherePoint, TwiceJ};

use crate::parallel::{par_mc_l2_squared, par_mc_mean_measure};

pub const DEFAULT_SEED: u64 = 1;

/// Criteria whose stated target contradicts an exact computation.
pub const KNOWN_FAILURES: &[u8] = &[9];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub expected_failure: bool,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let note = if self.expected_failure && !self.passed { " [known]" } else { "" };
        format!("[{status}]{note} {:>2} {:<28} {} ({:.2} s)", self.id, self.name, self.detail, self.seconds)
    }
}

pub const NAMES: [&str; 12] = [
    "coherent closed forms",
    "Jz eigenstate closed forms",
    "integer moment oracle",
    "monotonicity in q",
    "F2 moment inequality",
    "coherent-state driver",
    "coherent-state extremality",
    "random-ensemble means",
    "L2 distances",
    "rotation invariance",
    "series identities",
    "dynamics consistency",
];

/// Runs the selected criteria (all when `ids` is empty) in order.
pub fn run(ids: &[u8], seed: u64) -> Vec<CriterionResult> {
    (1..=12u8).filter(|id| ids.is_empty() || ids.contains(id)).map(|id| run_one(id, seed)).collect()
}

pub fn run_one(id: u8, seed: u64) -> CriterionResult {
    let start = Instant::now();
    let outcome = match id {
        1 => coherent_battery(),
        2 => jz_battery(),
        3 => moment_oracle(seed),
        4 => monotonicity(seed),
        5 => lemma1(seed),
        6 => driver(seed),
        7 => extremality(seed),
        8 => ensemble_means(seed),
        9 => l2_distances(seed),
        10 => rotation_invariance(seed),
        11 => series(seed),
        12 => dynamics(seed),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    let limit = match id {
        1 => Some(10.0),
        8 => Some(60.0),
        _ => None,
    };
    if let Some(limit) = limit {
        if seconds >= limit {
            passed = false;
            detail.push_str(&format!("; runtime {seconds:.1} s exceeds {limit} s"));
        }
    }
    CriterionResult {
        id,
        name: NAMES.get(usize::from(id).wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed,
        detail,
        expected_failure: KNOWN_FAILURES.contains(&id),
        seconds,
    }
}

type Outcome = Result<(bool, String)>;

fn random_state(twice_j: u32, seed: u64, index: u64) -> PureState {
    haar_random_state(TwiceJ::new(twice_j), &mut sample_rng(seed, index))
}

/// Haar-random rotation from a random spin-1/2 state.
fn random_rotation(seed: u64, index: u64) -> Rotation {
    let c = random_state(1, seed, index).coeffs().to_vec();
    Rotation::from_cayley_klein(c[0], c[1]).expect("unit spinor")
}

fn diff(a: Option<f64>, b: Option<f64>) -> f64 {
    match (a, b) {
        (Some(x), Some(y)) => (x - y).abs(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    }
}

/// Largest deviation over W, S, Y, Z and the participation ratios.
fn report_deviation(a: &MeasureReport, b: &MeasureReport) -> f64 {
    let rows = a.rows.iter().zip(&b.rows).map(|(x, y)| {
        diff(x.w, y.w).max(diff(x.s, y.s)).max(diff(x.y, y.y)).max(diff(x.z, y.z))
    });
    rows.fold((a.r - b.r).abs().max(diff(a.t, b.t)), f64::max)
}

fn coherent_battery() -> Outcome {
    let point = SpherePoint::finite(Complex64::new(0.6, -0.3));
    let (mut exact_dev, mut quad_dev) = (0.0f64, 0.0f64);
    for tj in 1..=20u32 {
        let twice_j = TwiceJ::new(tj);
        let state = coherent_state(point, twice_j);
        for q in [0.5, 1.0, 2.0, 3.0, 4.0] {
            let d = report_deviation(&measure_report(&state, &[q])?, &coherent_closed_forms(twice_j, q)?);
            if q >= 2.0 {
                exact_dev = exact_dev.max(d);
            } else {
                quad_dev = quad_dev.max(d);
            }
        }
    }
    Ok((exact_dev < 1e-12 && quad_dev < 1e-10, format!("max deviation exact {exact_dev:.2e}, quadrature {quad_dev:.2e}")))
}

fn jz_battery() -> Outcome {
    let mut dev = 0.0f64;
    let mut poles_equal = true;
    for tj in 1..=20u32 {
        let twice_j = TwiceJ::new(tj);
        for twice_m in (-(tj as i64)..=tj as i64).step_by(2) {
            let state = basis_state(twice_m, twice_j)?;
            let computed = measure_report(&state, &[1.0, 2.0, 3.0])?;
            for row in &computed.rows {
                let closed = jz_closed_forms(twice_j, twice_m, row.q)?;
                dev = dev.max(diff(row.w, closed.rows[0].w)).max(diff(row.s, closed.rows[0].s));
            }
            if twice_m.unsigned_abs() == u64::from(tj) {
                let pole = if twice_m > 0 { SpherePoint::NORTH } else { SpherePoint::SOUTH };
                let coh = measure_report(&coherent_state(pole, twice_j), &[1.0, 2.0, 3.0])?;
                poles_equal &= coh == computed;
            }
        }
    }
    Ok((dev < 1e-9 && poles_equal, format!("max deviation {dev:.2e}, m = ±j rows equal coherent rows: {poles_equal}")))
}

fn moment_oracle(seed: u64) -> Outcome {
    let mut dev = 0.0f64;
    for i in 0..200u64 {
        let tj = 1 + (i % 16) as u32;
        let state = random_state(tj, seed ^ 0x03, i);
        for q in 2..=4u32 {
            let grid = QuadratureGrid::for_order(TwiceJ::new(tj), q);
            dev = dev.max((moment_exact(&state, q)? - moment_quadrature(&state, f64::from(q), &grid)?).abs());
        }
    }
    Ok((dev < 1e-10, format!("max |exact - quadrature| {dev:.2e} over 200 states")))
}

fn monotonicity(seed: u64) -> Outcome {
    let qs = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0];
    let mut worst = f64::NEG_INFINITY;
    for i in 0..100u64 {
        let state = random_state(1 + (i % 8) as u32, seed ^ 0x04, i);
        let s: Vec<f64> = qs.iter().map(|&q| renyi_entropy(&state, q)).collect::<Result<_>>()?;
        worst = s.windows(2).map(|w| w[1] - w[0]).fold(worst, f64::max);
    }
    Ok((worst <= 1e-10, format!("largest increase S(q') - S(q) = {worst:.2e}")))
}

fn pattern_state(base: &PureState, c: f64, alpha: f64) -> Result<PureState> {
    let coeffs = base.coeffs().iter().enumerate().map(|(k, f)| Complex64::from_polar(f.norm(), c + alpha * k as f64)).collect();
    PureState::from_coefficients(base.twice_j(), coeffs)
}

fn lemma1(seed: u64) -> Outcome {
    let mut violations = 0;
    let mut false_equalities = 0;
    for i in 0..1000u64 {
        let state = random_state(1 + (i % 10) as u32, seed ^ 0x05, i);
        for q in [2, 3] {
            let r = lemma1_check(&state, q)?;
            violations += usize::from(!r.inequality_holds);
            false_equalities += usize::from(r.equality_case_detected && !r.moments_equal);
        }
    }
    let mut missed = 0;
    for i in 0..200u64 {
        let base = random_state(1 + (i % 10) as u32, seed ^ 0x55, i);
        let state = pattern_state(&base, 0.37 * i as f64, 1.3 - 0.011 * i as f64)?;
        for q in [2, 3] {
            let r = lemma1_check(&state, q)?;
            missed += usize::from(!(r.equality_case_detected && r.moments_equal));
        }
    }
    Ok((
        violations == 0 && missed == 0 && false_equalities == 0,
        format!("{violations} inequality violations in 2000 checks; {missed} of 400 phase-pattern equality cases missed"),
    ))
}

fn driver(seed: u64) -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..50u64 {
        let tj = 1 + (i % 8) as u32;
        let trace = theorem2_driver(&random_state(tj, seed ^ 0x06, i), 2, 200)?;
        let target = f64::from(tj + 1) / f64::from(2 * tj + 1);
        let w = trace.last().report.rows[0].w.unwrap_or(f64::NAN);
        worst = worst.max((w - target).abs());
    }
    Ok((worst < 1e-6, format!("max |W - W_coh| {worst:.2e} over 50 monotone traces")))
}

fn extremality(seed: u64) -> Outcome {
    let mut ok = true;
    let mut first = 0.0f64;
    let (mut max2, mut min_half) = (f64::NEG_INFINITY, f64::INFINITY);
    for tj in [2u32, 4] {
        let rep = extremality_report(TwiceJ::new(tj), &[0.5, 1.0, 2.0, 3.0], 100, &mut sample_rng(seed ^ 0x07, u64::from(tj)))?;
        ok &= rep.all_ok();
        for row in &rep.rows {
            first = first.max(row.max_abs_first);
            if row.q == 2.0 {
                max2 = max2.max(row.max_second);
            }
            if row.q == 0.5 {
                min_half = min_half.min(row.min_second);
            }
        }
    }
    Ok((ok, format!("max |dW/dt| {first:.2e}; max d2W(2)/dt2 {max2:.3e}; min d2W(1/2)/dt2 {min_half:.3e}")))
}

fn ensemble_means(seed: u64) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [3u64, 5, 9] {
        let tj = TwiceJ::new(n as u32 - 1);
        let s = par_mc_mean_measure(tj, 1.0, Measure::Entropy, 10_000, seed ^ 0x08)?;
        let w = par_mc_mean_measure(tj, 2.0, Measure::Moment, 10_000, seed ^ 0x18)?;
        let zs = s.z_score(expected_wehrl(n)?);
        let zw = w.z_score(expected_moment(n, 2.0)?);
        ok &= zs.abs() < 3.0 && zw.abs() < 3.0;
        parts.push(format!("N={n}: z_S {zs:+.2}, z_W {zw:+.2}"));
    }
    let asym = (expected_wehrl(1000)? - (1000f64.ln() + EULER_GAMMA - 1.0)).abs();
    ok &= asym < 0.01;
    parts.push(format!("N=1000 asymptotic gap {asym:.2e}"));
    Ok((ok, parts.join("; ")))
}

fn l2_distances(seed: u64) -> Outcome {
    let mut coherent_dev = 0.0f64;
    for tj in 1..=32u32 {
        let twice_j = TwiceJ::new(tj);
        let d2 = l2_to_uniform(&coherent_state(SpherePoint::NORTH, twice_j)).powi(2);
        coherent_dev = coherent_dev.max((d2 - f64::from(tj) / f64::from(2 * tj + 2)).abs());
    }
    let coherent_ok = coherent_dev < 1e-12;
    let mut random_ok = true;
    let mut zs = Vec::new();
    for tj in [2u32, 8, 32] {
        let twice_j = TwiceJ::new(tj);
        let z = par_mc_l2_squared(twice_j, 10_000, seed ^ 0x09)?.z_score(l2_squared_random(twice_j));
        random_ok &= z.abs() < 3.0;
        zs.push(format!("{z:+.2}"));
    }
    Ok((
        coherent_ok && random_ok,
        format!(
            "coherent target 2j/(4j+2) off by {coherent_dev:.3e} (exact value (2j)^2/((4j+1)(2j+1))); random z-scores {}",
            zs.join(", ")
        ),
    ))
}

fn rotation_invariance(seed: u64) -> Outcome {
    let qs = [0.5, 1.0, 2.0, 3.0];
    let mut dev = 0.0f64;
    let mut comp = 0.0f64;
    for i in 0..100u64 {
        let state = random_state(1 + (i % 6) as u32, seed ^ 0x0a, i);
        let rot = random_rotation(seed ^ 0x1a, i);
        dev = dev.max(report_deviation(&measure_report(&state, &qs)?, &measure_report(&rot.apply_state(&state), &qs)?));
        let other = random_rotation(seed ^ 0x2a, i);
        comp = comp.max(other.compose(&rot).apply_state(&state).phase_distance(&other.apply_state(&rot.apply_state(&state))));
        let point = random_state(1, seed ^ 0x3a, i);
        let gamma = -point.coeffs()[0] / point.coeffs()[1];
        let tj = state.twice_j();
        let moved = rot.apply_state(&coherent_state(SpherePoint::finite(gamma), tj));
        comp = comp.max(moved.phase_distance(&coherent_state(rot.apply_point(SpherePoint::finite(gamma)), tj)));
    }
    Ok((dev < 1e-9 && comp < 1e-10, format!("max measure change {dev:.2e}; composition law deviation {comp:.2e}")))
}

fn series(seed: u64) -> Outcome {
    let mut ok = true;
    let (mut z_bound, mut s_bound, mut worst) = (0.0f64, 0.0f64, f64::NEG_INFINITY);
    for i in 0..20u64 {
        let state = random_state(1 + (i % 6) as u32, seed ^ 0x0b, i);
        let z = z_from_w_series(&state, 400)?;
        let s = s_from_y_series(&state, 60)?;
        for (est, direct) in [(z, dual_entropy(&state, 1.0)?), (s, renyi_entropy(&state, 1.0)?)] {
            let lo = est.value - est.truncation_bound - 1e-10;
            let hi = est.value + 1e-10;
            ok &= direct >= lo && direct <= hi;
            worst = worst.max((direct - est.value).abs() - est.truncation_bound);
        }
        z_bound = z_bound.max(z.truncation_bound);
        s_bound = s_bound.max(s.truncation_bound);
    }
    Ok((ok, format!("direct values inside bounds (Z bound {z_bound:.2e}, S bound {s_bound:.2e}, worst excess {worst:.2e})")))
}

fn dynamics(seed: u64) -> Outcome {
    let mut rate_dev = 0.0f64;
    for i in 0..20u64 {
        let tj = TwiceJ::new(1 + (i % 5) as u32);
        let h = SpinHamiltonian::random_gue(tj, &mut sample_rng(seed ^ 0x0c, i));
        let psi = haar_random_state(tj, &mut sample_rng(seed ^ 0x1c, i));
        let q = [0.5, 1.0, 2.0, 3.0][i as usize % 4];
        rate_dev = rate_dev.max(entropy_time_series(&psi, &h, q, 1.0, 2)?.max_rate_deviation());
    }
    let mut drift = 0.0f64;
    for i in 0..5u64 {
        let tj = TwiceJ::new(2 + i as u32);
        let h = SpinHamiltonian::rotation(tj, 0.8, Complex64::new(-0.4, 0.25 * i as f64));
        let psi = haar_random_state(tj, &mut sample_rng(seed ^ 0x2c, i));
        let prop = Propagator::new(&h)?;
        for q in [0.5, 1.0, 2.0] {
            let s0 = renyi_entropy(&psi, q)?;
            for k in 1..=6 {
                drift = drift.max((renyi_entropy(&prop.evolve(&psi, 0.5 * f64::from(k))?, q)? - s0).abs());
            }
        }
    }
    Ok((rate_dev < 1e-6 && drift < 1e-9, format!("max rate deviation {rate_dev:.2e}; rotation drift {drift:.2e}")))
}
