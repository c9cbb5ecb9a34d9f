//! Gamma-family special functions and binomial tables.

use crate::prelude::*;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Natural logarithm of |Γ(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Digamma function Ψ(x) = Γ'(x)/Γ(x) for x > 0.
///
/// Shifts the argument above 12 with Ψ(x) = Ψ(x+1) − 1/x and finishes with
/// the asymptotic expansion.
pub fn digamma(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 12.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    let series = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0 - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * 691.0 / 32760.0)))));
    acc + x.ln() - 0.5 / x - series
}

/// ln C(n, k) via log-gamma.
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// Binomial coefficient C(n, k) as a float.
///
/// Exact below 2^53; larger values carry a few ulp of relative error, and
/// results beyond the float range come back as infinity via log-gamma.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0f64;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
        if !c.is_finite() {
            return ln_binomial(n as f64, k as f64).exp();
        }
    }
    if c < 9.0e15 {
        c.round()
    } else {
        c
    }
}

/// Table of ln k! for k = 0..=n.
#[derive(Debug, Clone)]
pub struct LnFactorials {
    table: Vec<f64>,
}

impl LnFactorials {
    pub fn new(n: usize) -> Self {
        let table = (0..=n).map(|k| ln_gamma(k as f64 + 1.0)).collect();
        Self { table }
    }

    /// Largest argument covered.
    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    pub fn ln_factorial(&self, k: usize) -> f64 {
        self.table[k]
    }

    /// ln C(n, k); panics if n exceeds the table.
    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        debug_assert!(k <= n);
        self.table[n] - self.table[k] - self.table[n - k]
    }
}

/// Γ(a)/Γ(b) evaluated through log-gamma, for positive arguments.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    (ln_gamma(a) - ln_gamma(b)).exp()
}

/// Harmonic-type sum Σ_{n=2}^{N} 1/n.
pub fn harmonic_from_two(n: u64) -> f64 {
    (2..=n).rev().map(|k| 1.0 / k as f64).sum()
}
