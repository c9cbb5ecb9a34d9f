use core::fmt;

use super::{check_order, dual_entropy_with, dual_moment_with, integer_order, moment_with, renyi_entropy_with};
use crate::quadrature::Cubature;
use crate::error::Result;
use crate::prelude::*;
use crate::spin::{PureState, TwiceJ};

/// How a row of measures was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    Quadrature,
    ClosedForm,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Quadrature => "quadrature",
            Method::ClosedForm => "closed-form",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Measures at one Rényi index; `None` where a quantity is undefined or has no closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureRow {
    pub q: f64,
    pub w: Option<f64>,
    pub s: Option<f64>,
    pub y: Option<f64>,
    pub z: Option<f64>,
    pub method: Method,
}

/// Localization measures of one state: per-q rows plus the participation ratios
/// R = 1/W^(2) and T = 1/Y^(2).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub twice_j: TwiceJ,
    pub rows: Vec<MeasureRow>,
    pub r: f64,
    pub t: Option<f64>,
}

impl MeasureReport {
    pub fn row(&self, q: f64) -> Option<&MeasureRow> {
        self.rows.iter().find(|r| r.q == q)
    }
}

/// Computes W, S, Y, Z for each q, plus R and T.
///
/// Rows with integer q ≥ 2 are exact; q = 1 (logarithmic integrands) and
/// non-integer q use adaptive cubature.
pub fn measure_report(state: &PureState, qs: &[f64]) -> Result<MeasureReport> {
    measure_report_with(state, qs, &Cubature::default())
}

/// [`measure_report`] with explicit cubature settings for the adaptive rows.
pub fn measure_report_with(state: &PureState, qs: &[f64], cub: &Cubature) -> Result<MeasureReport> {
    let dual = state.twice_j().get() > 0;
    let mut rows = Vec::with_capacity(qs.len());
    for &q in qs {
        check_order(q)?;
        let exact = matches!(integer_order(q), Some(k) if k >= 2);
        rows.push(MeasureRow {
            q,
            w: Some(moment_with(state, q, cub)?),
            s: Some(renyi_entropy_with(state, q, cub)?),
            y: if dual { Some(dual_moment_with(state, q, cub)?) } else { None },
            z: if dual { Some(dual_entropy_with(state, q, cub)?) } else { None },
            method: if exact { Method::Exact } else { Method::Quadrature },
        });
    }
    Ok(MeasureReport {
        twice_j: state.twice_j(),
        rows,
        r: super::participation(state),
        t: if dual { Some(super::dual_participation(state)?) } else { None },
    })
}
