use super::report::{MeasureReport, MeasureRow, Method};
use super::{check_order, integer_order};
use crate::error::{Error, Result};
use crate::prelude::*;
use crate::special::{binomial, digamma, ln_binomial, ln_gamma, EULER_GAMMA};
use crate::spin::TwiceJ;

/// Closed-form measures of a coherent state.
pub fn coherent_closed_forms(twice_j: TwiceJ, q: f64) -> Result<MeasureReport> {
    check_order(q)?;
    let n2j = f64::from(twice_j.get());
    let w = (n2j + 1.0) / (q * n2j + 1.0);
    let s = if q == 1.0 { n2j / (n2j + 1.0) } else { w.ln() / (1.0 - q) };
    let (y, z, t) = if twice_j.get() == 0 {
        (None, None, None)
    } else {
        let inv = 1.0 / n2j;
        let y = (ln_gamma(q + 1.0) + ln_gamma(inv + 2.0) - ln_gamma(q + 1.0 + inv)).exp();
        let z = if q == 1.0 { digamma((2.0 * n2j + 1.0) / n2j) + EULER_GAMMA - 1.0 } else { y.ln() / (1.0 - q) };
        (Some(y), Some(z), Some((2.0 * n2j + 1.0) / (2.0 * n2j)))
    };
    Ok(MeasureReport {
        twice_j,
        rows: vec![MeasureRow { q, w: Some(w), s: Some(s), y, z, method: Method::ClosedForm }],
        r: (2.0 * n2j + 1.0) / (n2j + 1.0),
        t,
    })
}

/// Closed-form measures of the J_z eigenstate |m⟩, m = twice_m/2.
///
/// W is available for integer q and S for q = 1 (and via W for integer q ≥ 2);
/// dual quantities have no closed form here and are left empty.
pub fn jz_closed_forms(twice_j: TwiceJ, twice_m: i64, q: f64) -> Result<MeasureReport> {
    check_order(q)?;
    let tj = i64::from(twice_j.get());
    if twice_m.abs() > tj || (tj - twice_m) % 2 != 0 {
        return Err(Error::ProjectionOutOfRange { twice_m, twice_j: twice_j.get() });
    }
    let n2j = tj as f64;
    let k = ((tj - twice_m) / 2) as u64; // j − m
    let jpm = (tj as u64) - k; // j + m
    let w_of = |qi: u64| {
        let qf = qi as f64;
        let ln = qf * ln_binomial(n2j, k as f64) - ln_binomial(qf * n2j, qf * k as f64);
        (n2j + 1.0) / (qf * n2j + 1.0) * ln.exp()
    };
    let (w, s) = match integer_order(q) {
        Some(1) => {
            let psi = n2j * digamma(n2j + 1.0)
                - jpm as f64 * digamma(jpm as f64 + 1.0)
                - k as f64 * digamma(k as f64 + 1.0);
            let s = n2j / (n2j + 1.0) - binomial(tj as u64, k).ln() + psi;
            (Some(1.0), Some(s))
        }
        Some(qi) => {
            let w = w_of(u64::from(qi));
            (Some(w), Some(w.ln() / (1.0 - q)))
        }
        None => (None, None),
    };
    let r = 1.0 / w_of(2);
    Ok(MeasureReport {
        twice_j,
        rows: vec![MeasureRow { q, w, s, y: None, z: None, method: Method::ClosedForm }],
        r,
        t: None,
    })
}

/// Wehrl entropy m[Ψ(m+d) − Ψ(m+1)] of an SU(d) coherent state in the m-th symmetric representation.
pub fn sud_coherent_wehrl(d: u32, m: u32) -> Result<f64> {
    if d < 2 || m < 1 {
        return Err(Error::param("SU(d) coherent entropy needs d >= 2 and m >= 1"));
    }
    let (d, m) = (f64::from(d), f64::from(m));
    Ok(m * (digamma(m + d) - digamma(m + 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::LN_2;

    #[test]
    fn coherent_examples() {
        let r = coherent_closed_forms(TwiceJ::new(2), 2.0).unwrap();
        let row = r.rows[0];
        assert_abs_diff_eq!(row.w.unwrap(), 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(row.y.unwrap(), 0.8, epsilon = 1e-14);
        assert_abs_diff_eq!(r.r, 5.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.t.unwrap(), 1.25, epsilon = 1e-15);
        let r = coherent_closed_forms(TwiceJ::new(3), 1.0).unwrap();
        assert_abs_diff_eq!(r.rows[0].s.unwrap(), 0.75, epsilon = 1e-15);
        let z = coherent_closed_forms(TwiceJ::new(2), 1.0).unwrap().rows[0].z.unwrap();
        assert_abs_diff_eq!(z, 5.0 / 3.0 - 2.0 * LN_2, epsilon = 1e-14);
    }

    #[test]
    fn coherent_entropy_is_continuous_at_one() {
        for tj in [1u32, 4, 11] {
            let at1 = coherent_closed_forms(TwiceJ::new(tj), 1.0).unwrap().rows[0];
            for q in [1.0 - 1e-7, 1.0 + 1e-7] {
                let row = coherent_closed_forms(TwiceJ::new(tj), q).unwrap().rows[0];
                assert_abs_diff_eq!(row.s.unwrap(), at1.s.unwrap(), epsilon = 1e-6);
                assert_abs_diff_eq!(row.z.unwrap(), at1.z.unwrap(), epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn jz_examples() {
        let tj = TwiceJ::new(2);
        let r = jz_closed_forms(tj, 0, 2.0).unwrap();
        assert_abs_diff_eq!(r.rows[0].w.unwrap(), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(r.r, 2.5, epsilon = 1e-14);
        let r = jz_closed_forms(tj, 0, 1.0).unwrap();
        assert_abs_diff_eq!(r.rows[0].s.unwrap(), 5.0 / 3.0 - LN_2, epsilon = 1e-14);
        for tj in [1u32, 2, 7] {
            for q in [1.0, 2.0, 3.0] {
                let t = TwiceJ::new(tj);
                let c = coherent_closed_forms(t, q).unwrap().rows[0];
                for m in [tj as i64, -(tj as i64)] {
                    let z = jz_closed_forms(t, m, q).unwrap().rows[0];
                    assert_eq!(z.w, c.w);
                    assert_eq!(z.s, c.s);
                }
            }
        }
        assert!(jz_closed_forms(tj, 3, 1.0).is_err());
    }

    #[test]
    fn sud_examples() {
        assert_abs_diff_eq!(sud_coherent_wehrl(2, 2).unwrap(), 2.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sud_coherent_wehrl(2, 1).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(sud_coherent_wehrl(3, 1).unwrap(), 5.0 / 6.0, epsilon = 1e-14);
        assert!(sud_coherent_wehrl(1, 1).is_err());
    }
}
