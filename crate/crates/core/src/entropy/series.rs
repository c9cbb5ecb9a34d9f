use super::{moments_exact, dual_prefactor};
use crate::error::{Error, Result};
use crate::prelude::*;
use crate::quadrature::QuadratureGrid;
use crate::spin::PureState;

/// Partial sum of a series identity with a rigorous bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEstimate {
    pub value: f64,
    /// The true value lies in [value − truncation_bound, value].
    pub truncation_bound: f64,
    /// Magnitude of the last included term.
    pub last_term: f64,
    pub n_max: u32,
}

/// Z = (1/2j)·(1 − Σ_{n≥2} W^(n)/(n(n−1))).
///
/// Moments do not increase with n, so the tail after n_max is at most
/// W^(n_max)/(2j·n_max).
pub fn z_from_w_series(state: &PureState, n_max: u32) -> Result<SeriesEstimate> {
    if n_max < 2 {
        return Err(Error::param("series needs n_max >= 2"));
    }
    dual_prefactor(state)?;
    let tj = f64::from(state.twice_j().get());
    let w = moments_exact(state, n_max);
    let terms = (2..=n_max).map(|n| w[n as usize - 1] / (f64::from(n) * f64::from(n - 1)));
    partial(terms, w[n_max as usize - 1], n_max, 1.0 / tj)
}

/// S = 2j·(1 − Σ_{n≥2} Y^(n)/(n(n−1))), with tail at most 2j·Y^(n_max)/n_max.
///
/// All Y^(n) come from one product grid that is exact for n ≤ n_max.
pub fn s_from_y_series(state: &PureState, n_max: u32) -> Result<SeriesEstimate> {
    if n_max < 2 {
        return Err(Error::param("series needs n_max >= 2"));
    }
    let pre = dual_prefactor(state)?;
    let tj = f64::from(state.twice_j().get());
    let grid = QuadratureGrid::for_order(state.twice_j(), n_max);
    let mut y = vec![0.0; n_max as usize + 1];
    for (u, p, wgt) in grid.nodes() {
        let i = 1.0 - state.husimi_polar(u, p);
        let mut pw = wgt;
        for slot in y.iter_mut().skip(1) {
            pw *= i;
            *slot += pw;
        }
    }
    for v in y.iter_mut() {
        *v *= pre;
    }
    let terms = (2..=n_max).map(|n| y[n as usize] / (f64::from(n) * f64::from(n - 1)));
    partial(terms, y[n_max as usize], n_max, tj)
}

fn partial(terms: impl Iterator<Item = f64>, last_moment: f64, n_max: u32, scale: f64) -> Result<SeriesEstimate> {
    let mut sum = 0.0;
    let mut last = 0.0;
    for t in terms {
        sum += t;
        last = t;
    }
    Ok(SeriesEstimate {
        value: scale * (1.0 - sum),
        truncation_bound: scale * last_moment / f64::from(n_max),
        last_term: scale * last,
        n_max,
    })
}
