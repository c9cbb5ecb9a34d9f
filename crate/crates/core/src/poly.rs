//! Dense complex polynomial helpers (ascending coefficient order).

use crate::prelude::*;

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c)
}

/// Value and first derivative.
pub(crate) fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub(crate) fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (k, &y) in b.iter().enumerate() {
            out[i + k] += x * y;
        }
    }
    out
}

/// Coefficients of the polynomial p(c + z): the Taylor coefficients p^(i)(c)/i!.
pub(crate) fn taylor_shift(coeffs: &[Complex64], c: Complex64) -> Vec<Complex64> {
    let mut t = coeffs.to_vec();
    let n = t.len();
    for i in 0..n {
        for k in (i..n - 1).rev() {
            let next = t[k + 1];
            t[k] += c * next;
        }
    }
    t
}

/// Same shift applied to magnitudes; bounds the rounding error of [`taylor_shift`].
pub(crate) fn taylor_shift_abs(coeffs: &[Complex64], r: f64) -> Vec<f64> {
    let mut t: Vec<f64> = coeffs.iter().map(|c| c.norm()).collect();
    let n = t.len();
    for i in 0..n {
        for k in (i..n - 1).rev() {
            let next = t[k + 1];
            t[k] += r * next;
        }
    }
    t
}

/// i-th derivative divided by i!, as a polynomial.
pub(crate) fn scaled_derivative(coeffs: &[Complex64], order: usize) -> Vec<Complex64> {
    if order >= coeffs.len() {
        return Vec::new();
    }
    (order..coeffs.len())
        .map(|k| coeffs[k] * crate::special::binomial(k as u64, order as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn shift_expands_about_new_center() {
        // p(z) = z^2 - 1; p(1 + w) = w^2 + 2w
        let p = [c(-1.0), c(0.0), c(1.0)];
        let t = taylor_shift(&p, c(1.0));
        assert_eq!(t, vec![c(0.0), c(2.0), c(1.0)]);
        let d = scaled_derivative(&p, 1);
        assert_eq!(d, vec![c(0.0), c(2.0)]);
    }

    #[test]
    fn product_and_derivative() {
        let p = mul(&[c(1.0), c(1.0)], &[c(-1.0), c(1.0)]);
        assert_eq!(p, vec![c(-1.0), c(0.0), c(1.0)]);
        let (v, dv) = horner_with_derivative(&p, c(3.0));
        assert_eq!((v, dv), (c(8.0), c(6.0)));
    }
}
