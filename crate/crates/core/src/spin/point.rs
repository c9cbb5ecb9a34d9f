use crate::prelude::*;
use core::f64::consts::{PI, TAU};

/// Point of the Bloch sphere as a Riemann-sphere coordinate γ = tan(θ/2)·e^{−iφ}.
///
/// `Infinity` is the south pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub const NORTH: Self = SpherePoint::Finite(Complex64::new(0.0, 0.0));
    pub const SOUTH: Self = SpherePoint::Infinity;

    pub fn finite(gamma: Complex64) -> Self {
        SpherePoint::Finite(gamma)
    }

    /// From polar angles, θ ∈ [0, π]. θ ≥ π gives the south pole.
    pub fn from_polar(theta: f64, phi: f64) -> Self {
        if theta >= PI {
            return SpherePoint::Infinity;
        }
        let r = (theta / 2.0).tan();
        SpherePoint::Finite(Complex64::from_polar(r, -phi))
    }

    pub fn gamma(&self) -> Option<Complex64> {
        match *self {
            SpherePoint::Finite(g) => Some(g),
            SpherePoint::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    /// Polar angles (θ, φ) with φ ∈ [0, 2π); the poles report φ = 0.
    pub fn polar(&self) -> (f64, f64) {
        match *self {
            SpherePoint::Infinity => (PI, 0.0),
            SpherePoint::Finite(g) => {
                let r = g.norm();
                if r == 0.0 {
                    return (0.0, 0.0);
                }
                let mut phi = (-g.im).atan2(g.re);
                if phi < 0.0 {
                    phi += TAU;
                }
                if phi >= TAU {
                    phi = 0.0;
                }
                (2.0 * r.atan(), phi)
            }
        }
    }

    /// cos θ = (1 − |γ|²)/(1 + |γ|²).
    pub fn cos_theta(&self) -> f64 {
        self.unit_vector()[2]
    }

    /// Cartesian unit vector (sin θ cos φ, sin θ sin φ, cos θ).
    pub fn unit_vector(&self) -> [f64; 3] {
        match *self {
            SpherePoint::Infinity => [0.0, 0.0, -1.0],
            SpherePoint::Finite(g) => {
                let r2 = g.norm_sqr();
                if r2 <= 1.0 {
                    let d = 1.0 + r2;
                    [2.0 * g.re / d, -2.0 * g.im / d, (1.0 - r2) / d]
                } else {
                    let w = g.inv();
                    let p2 = w.norm_sqr();
                    let d = 1.0 + p2;
                    [2.0 * w.re / d, 2.0 * w.im / d, (p2 - 1.0) / d]
                }
            }
        }
    }

    /// Inverse of [`unit_vector`](Self::unit_vector); the input is normalized first.
    pub fn from_unit_vector(v: [f64; 3]) -> Self {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let (x, y, z) = (v[0] / n, v[1] / n, v[2] / n);
        if z >= 0.0 {
            SpherePoint::Finite(Complex64::new(x, -y) / (1.0 + z))
        } else {
            let rho = Complex64::new(x, y);
            if rho.is_zero() {
                SpherePoint::Infinity
            } else {
                SpherePoint::Finite(Complex64::new(1.0 - z, 0.0) / rho)
            }
        }
    }

    /// Diametrically opposite point, −1/γ̄.
    pub fn antipode(&self) -> Self {
        match *self {
            SpherePoint::Infinity => SpherePoint::NORTH,
            SpherePoint::Finite(g) if g.is_zero() => SpherePoint::Infinity,
            SpherePoint::Finite(g) => SpherePoint::Finite(-g.conj().inv()),
        }
    }

    /// Euclidean distance between the unit vectors (0 ..= 2).
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        let a = self.unit_vector();
        let b = other.unit_vector();
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }
}

impl From<Complex64> for SpherePoint {
    fn from(g: Complex64) -> Self {
        SpherePoint::Finite(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn poles() {
        assert_eq!(SpherePoint::NORTH.polar(), (0.0, 0.0));
        assert_eq!(SpherePoint::Infinity.polar(), (PI, 0.0));
        assert_eq!(SpherePoint::from_polar(PI, 1.0), SpherePoint::Infinity);
        assert_eq!(SpherePoint::NORTH.antipode(), SpherePoint::Infinity);
    }

    #[test]
    fn polar_convention() {
        // γ = i has e^{iφ} = γ̄/|γ| = −i, so φ = 3π/2, and θ = π/2.
        let p = SpherePoint::finite(Complex64::new(0.0, 1.0));
        let (t, f) = p.polar();
        assert_abs_diff_eq!(t, PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f, 1.5 * PI, epsilon = 1e-15);
        assert_abs_diff_eq!(p.cos_theta(), 0.0, epsilon = 1e-15);
        let q = SpherePoint::from_polar(t, f);
        assert_abs_diff_eq!(q.gamma().unwrap().re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.gamma().unwrap().im, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn unit_vector_round_trip() {
        for &(re, im) in &[(0.3, -0.2), (2.0, 5.0), (-1e6, 3.0), (0.0, 0.0), (1.0, 0.0)] {
            let p = SpherePoint::finite(Complex64::new(re, im));
            let (t, f) = p.polar();
            let v = p.unit_vector();
            assert_abs_diff_eq!(v[0], t.sin() * f.cos(), epsilon = 1e-14);
            assert_abs_diff_eq!(v[1], t.sin() * f.sin(), epsilon = 1e-14);
            assert_abs_diff_eq!(v[2], t.cos(), epsilon = 1e-14);
            let g = SpherePoint::from_unit_vector(v).gamma().unwrap();
            assert!((g - Complex64::new(re, im)).norm() <= 1e-12 * (1.0 + g.norm()));
        }
        assert_eq!(SpherePoint::from_unit_vector([0.0, 0.0, -2.0]), SpherePoint::Infinity);
    }

    #[test]
    fn antipode_is_opposite() {
        let p = SpherePoint::finite(Complex64::new(0.4, 1.3));
        assert_abs_diff_eq!(p.chordal_distance(&p.antipode()), 2.0, epsilon = 1e-14);
    }
}
