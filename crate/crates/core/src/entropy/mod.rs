//! Husimi moments W^(q), Rényi–Wehrl entropies S^(q), their duals Y^(q) and
//! Z^(q) built on 1 − ℋ, and participation ratios.
//!
//! Integer orders use exact formulas; the others integrate numerically.

mod closed_form;
mod lines;
mod report;
mod series;

pub use closed_form::{coherent_closed_forms, jz_closed_forms, sud_coherent_wehrl};
pub use lines::wehrl_entropy_lines;
pub use report::{measure_report, measure_report_with, Method, MeasureReport, MeasureRow};
pub use series::{s_from_y_series, z_from_w_series, SeriesEstimate};

use crate::error::{Error, Result};
use crate::prelude::*;
use crate::quadrature::{Cubature, Estimate, QuadratureGrid};
use crate::special::LnFactorials;
use crate::spin::{roots_from_state, PureState};

/// Integer value of `q` if it is a positive whole number.
pub fn integer_order(q: f64) -> Option<u32> {
    (q >= 1.0 && q.fract() == 0.0 && q <= f64::from(u32::MAX)).then_some(q as u32)
}

pub(crate) fn check_order(q: f64) -> Result<()> {
    if q > 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidOrder(q))
    }
}

/// Binomially normalized self-convolutions h^(n), n = 1..=q_max, with
/// f^{*n}_m = h^(n)_m·√C(2nj, m).
fn normalized_powers(state: &PureState, q_max: u32) -> Vec<Vec<Complex64>> {
    let tj = state.twice_j().get() as usize;
    let table = LnFactorials::new(tj * q_max as usize);
    let b: Vec<Complex64> = state
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, f)| f * (-0.5 * table.ln_binomial(tj, k)).exp())
        .collect();
    let mut out = Vec::with_capacity(q_max as usize);
    out.push(b.clone());
    for n in 2..=q_max as usize {
        let prev = &out[n - 2];
        let top = n * tj;
        let prev_top = (n - 1) * tj;
        let mut h = vec![Complex64::zero(); top + 1];
        for (m, hm) in h.iter_mut().enumerate() {
            let kmin = m.saturating_sub(prev_top);
            let kmax = m.min(tj);
            let ln_den = table.ln_binomial(top, m);
            let mut acc = Complex64::zero();
            for k in kmin..=kmax {
                let w = (0.5 * (table.ln_binomial(tj, k) + table.ln_binomial(prev_top, m - k) - ln_den)).exp();
                acc += b[k] * prev[m - k] * w;
            }
            *hm = acc;
        }
        out.push(h);
    }
    out
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// W^(n) for n = 1..=q_max by coefficient convolution.
pub fn moments_exact(state: &PureState, q_max: u32) -> Vec<f64> {
    let n_dim = state.dim() as f64;
    let tj = f64::from(state.twice_j().get());
    normalized_powers(state, q_max)
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let n = (i + 1) as f64;
            n_dim / (n * tj + 1.0) * neumaier_sum(h.iter().map(|c| c.norm_sqr()))
        })
        .collect()
}

/// Exact integer moment W^(q) = N/(2qj+1) Σ_m C(2qj,m)^{-1} |(f^{*q})_m|².
pub fn moment_exact(state: &PureState, q: u32) -> Result<f64> {
    if q == 0 {
        return Err(Error::InvalidOrder(0.0));
    }
    Ok(*moments_exact(state, q).last().expect("q >= 1"))
}

/// W^(q) = N ∫ ℋ^q dμ on a product grid.
pub fn moment_quadrature(state: &PureState, q: f64, grid: &QuadratureGrid) -> Result<f64> {
    check_order(q)?;
    let n = state.dim() as f64;
    Ok(n * grid.integrate(|u, p| pow(state.husimi_polar(u, p), q)))
}

fn pow(x: f64, q: f64) -> f64 {
    match integer_order(q) {
        Some(k) if k <= 64 => x.powi(k as i32),
        _ => x.max(0.0).powf(q),
    }
}

/// Subdivision points (u, φ) at the Husimi zeros and their antipodes.
pub fn breakpoints(state: &PureState) -> Vec<(f64, f64)> {
    let roots = roots_from_state(state);
    let mut pts = Vec::new();
    for p in roots.points() {
        for q in [p, p.antipode()] {
            let (theta, phi) = q.polar();
            let u = theta.cos();
            if u > -1.0 && u < 1.0 {
                pts.push((u, phi));
            }
        }
    }
    pts
}

fn integrate_adaptive(state: &PureState, cub: &Cubature, f: impl Fn(f64) -> f64) -> Result<Estimate> {
    cub.integrate_sphere(|u, p| f(state.husimi_polar(u, p)), &breakpoints(state))
}

/// W^(q) by adaptive cubature, any q > 0.
pub fn moment_adaptive(state: &PureState, q: f64, cub: &Cubature) -> Result<Estimate> {
    check_order(q)?;
    let n = state.dim() as f64;
    let e = integrate_adaptive(state, cub, |h| pow(h, q))?;
    Ok(Estimate { value: n * e.value, error: n * e.error, ..e })
}

/// W^(q): exact for integer q, adaptive cubature otherwise.
pub fn moment(state: &PureState, q: f64) -> Result<f64> {
    moment_with(state, q, &Cubature::default())
}

pub fn moment_with(state: &PureState, q: f64, cub: &Cubature) -> Result<f64> {
    check_order(q)?;
    match integer_order(q) {
        Some(k) => moment_exact(state, k),
        None => Ok(moment_adaptive(state, q, cub)?.value),
    }
}

/// Wehrl entropy S = −N ∫ ℋ ln ℋ dμ.
pub fn wehrl_entropy(state: &PureState) -> Result<f64> {
    wehrl_entropy_lines(state, &Cubature::default()).map(|e| e.value)
}

/// Wehrl entropy by two-dimensional cubature of −ℋ ln ℋ.
pub fn wehrl_entropy_adaptive(state: &PureState, cub: &Cubature) -> Result<Estimate> {
    let n = state.dim() as f64;
    let e = integrate_adaptive(state, cub, xlogx_neg)?;
    Ok(Estimate { value: n * e.value, error: n * e.error, ..e })
}

fn xlogx_neg(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// S^(q) = ln W^(q)/(1 − q); the Wehrl entropy at q = 1.
pub fn renyi_entropy(state: &PureState, q: f64) -> Result<f64> {
    renyi_entropy_with(state, q, &Cubature::default())
}

pub fn renyi_entropy_with(state: &PureState, q: f64, cub: &Cubature) -> Result<f64> {
    check_order(q)?;
    if q == 1.0 {
        return wehrl_entropy_lines(state, cub).map(|e| e.value);
    }
    Ok(moment_with(state, q, cub)?.ln() / (1.0 - q))
}

fn dual_prefactor(state: &PureState) -> Result<f64> {
    let tj = state.twice_j().get();
    if tj == 0 {
        return Err(Error::DualUndefined);
    }
    Ok(state.dim() as f64 / f64::from(tj))
}

/// Y^(q) = N/(N−1) ∫ (1 − ℋ)^q dμ.
pub fn dual_moment(state: &PureState, q: f64) -> Result<f64> {
    dual_moment_with(state, q, &Cubature::default())
}

pub fn dual_moment_with(state: &PureState, q: f64, cub: &Cubature) -> Result<f64> {
    check_order(q)?;
    let pre = dual_prefactor(state)?;
    match integer_order(q) {
        Some(k) if k <= 12 => {
            // Binomial expansion over W^(i)/N with W^(0)/N = 1.
            let n = state.dim() as f64;
            let w = moments_exact(state, k);
            let mut sum = 1.0;
            for i in 1..=k {
                let sign = if i % 2 == 1 { -1.0 } else { 1.0 };
                sum += sign * crate::special::binomial(u64::from(k), u64::from(i)) * w[i as usize - 1] / n;
            }
            Ok(pre * sum)
        }
        Some(k) => {
            let grid = QuadratureGrid::for_order(state.twice_j(), k);
            Ok(pre * grid.integrate(|u, p| (1.0 - state.husimi_polar(u, p)).powi(k as i32)))
        }
        None => dual_moment_adaptive(state, q, cub).map(|e| e.value),
    }
}

pub fn dual_moment_adaptive(state: &PureState, q: f64, cub: &Cubature) -> Result<Estimate> {
    check_order(q)?;
    let pre = dual_prefactor(state)?;
    let e = integrate_adaptive(state, cub, |h| pow(1.0 - h, q))?;
    Ok(Estimate { value: pre * e.value, error: pre * e.error, ..e })
}

/// Y^(q) on a product grid.
pub fn dual_moment_quadrature(state: &PureState, q: f64, grid: &QuadratureGrid) -> Result<f64> {
    check_order(q)?;
    let pre = dual_prefactor(state)?;
    Ok(pre * grid.integrate(|u, p| pow(1.0 - state.husimi_polar(u, p), q)))
}

/// Z^(q) = ln Y^(q)/(1 − q); at q = 1, −N/(N−1) ∫ (1−ℋ) ln(1−ℋ) dμ.
pub fn dual_entropy(state: &PureState, q: f64) -> Result<f64> {
    dual_entropy_with(state, q, &Cubature::default())
}

pub fn dual_entropy_with(state: &PureState, q: f64, cub: &Cubature) -> Result<f64> {
    check_order(q)?;
    if q == 1.0 {
        let pre = dual_prefactor(state)?;
        let e = integrate_adaptive(state, cub, |h| xlogx_neg(1.0 - h))?;
        return Ok(pre * e.value);
    }
    Ok(dual_moment_with(state, q, cub)?.ln() / (1.0 - q))
}

/// Wehrl participation ratio R = 1/W^(2).
pub fn participation(state: &PureState) -> f64 {
    1.0 / moment_exact(state, 2).expect("order 2 is valid")
}

/// Dual participation ratio T = 1/Y^(2).
pub fn dual_participation(state: &PureState) -> Result<f64> {
    Ok(1.0 / dual_moment(state, 2.0)?)
}
