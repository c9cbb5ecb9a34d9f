//! Wehrl entropy with the φ integral done in closed form.
//!
//! On a circle |γ| = r, |ψ|² = Σ_n H_n e^{−inφ} is a trigonometric polynomial
//! of degree ≤ 2j, and ln|ψ|² = ln|c|² + 2 Σ_k ln|γ − γ_k| where every
//! logarithm has an explicit Fourier series. The circle average of ℋ ln ℋ is
//! therefore a finite sum, leaving a one-dimensional integral in u.

use crate::error::Result;
use crate::prelude::*;
use crate::quadrature::{Cubature, Estimate};
use crate::spin::{binomial_row, polynomial_roots, PureState, TwiceJ, ZERO_AMPLITUDE};

/// Coefficients and roots of the Bargmann polynomial, for the northern hemisphere.
struct Hemisphere {
    coeffs: Vec<Complex64>,
    /// Finite roots, including the ones at γ = 0.
    roots: Vec<Complex64>,
    ln_lead: f64,
    twice_j: f64,
}

impl Hemisphere {
    /// From Bargmann coefficients; amplitudes below `ZERO_AMPLITUDE` count as zero.
    fn new(twice_j: TwiceJ, f: &[Complex64]) -> Self {
        let binom = binomial_row(twice_j);
        let significant = |k: &usize| f[*k].norm() / binom[*k].sqrt() > ZERO_AMPLITUDE;
        let hi = (0..f.len()).rev().find(significant).unwrap_or(0);
        let lo = (0..f.len()).find(significant).unwrap_or(0);
        let mut roots = vec![Complex64::zero(); lo];
        roots.extend(polynomial_roots(&f[lo..=hi]));
        let mut coeffs = vec![Complex64::zero(); lo];
        coeffs.extend_from_slice(&f[lo..=hi]);
        Self { coeffs, roots, ln_lead: f[hi].norm_sqr().ln(), twice_j: f64::from(twice_j.get()) }
    }

    /// (1/2π) ∫ ℋ ln ℋ dφ on the circle at u = cos θ ≥ 0.
    fn circle_mean(&self, u: f64) -> f64 {
        // r^k underflows to 0 before ln r reaches −∞, so H_0 ln r stays 0 at the pole
        let r = ((1.0 - u) / (1.0 + u)).max(0.0).sqrt().max(f64::MIN_POSITIVE);
        let d = self.coeffs.len();
        // H_n = Σ_l f_{l+n} f̄_l r^{2l+n}
        let mut scaled = Vec::with_capacity(d);
        let mut p = 1.0;
        for c in &self.coeffs {
            scaled.push(c * p);
            p *= r;
        }
        let h: Vec<Complex64> =
            (0..d).map(|n| (0..d - n).map(|l| scaled[l + n] * scaled[l].conj()).sum()).collect();
        let ln_s = self.twice_j * ((1.0 + u) / 2.0).ln();
        let mut total = h[0].re * (ln_s + self.ln_lead);
        for &g in &self.roots {
            let rho = g.norm();
            let (ln_max, w, conj_h) = if r > rho { (r.ln(), g / r, false) } else { (rho.ln(), r / g, true) };
            let mut series = 0.0;
            let mut wn = Complex64::new(1.0, 0.0);
            for (n, hn) in h.iter().enumerate().skip(1) {
                wn *= w;
                let hn = if conj_h { hn.conj() } else { *hn };
                series += (hn * wn).re / n as f64;
            }
            total += 2.0 * (h[0].re * ln_max - series);
        }
        ln_s.exp() * total
    }

    fn root_breaks(&self) -> Vec<f64> {
        self.roots
            .iter()
            .map(|g| {
                let r2 = g.norm_sqr();
                (1.0 - r2) / (1.0 + r2)
            })
            .filter(|&u| u > 0.0 && u < 1.0)
            .collect()
    }
}

/// Wehrl entropy S = −N ∫ ℋ ln ℋ dμ from circle averages and adaptive u integration.
///
/// On the circle at −u, ℋ equals the northern Husimi function at u of the
/// reversed coefficient list, up to φ ↦ −φ, which leaves circle averages unchanged.
pub fn wehrl_entropy_lines(state: &PureState, cub: &Cubature) -> Result<Estimate> {
    let n = state.dim() as f64;
    let f = state.coeffs();
    let reversed: Vec<Complex64> = f.iter().rev().copied().collect();
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    for half in [Hemisphere::new(state.twice_j(), f), Hemisphere::new(state.twice_j(), &reversed)] {
        let e = cub.integrate_1d(|u| half.circle_mean(u), 0.0, 1.0, &half.root_breaks())?;
        value += e.value;
        error += e.error;
        evaluations += e.evaluations;
    }
    // dμ = du dφ/4π over u ∈ [−1, 1]
    Ok(Estimate { value: -n * value / 2.0, error: n * error / 2.0, evaluations })
}
