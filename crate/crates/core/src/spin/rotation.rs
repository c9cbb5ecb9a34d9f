use crate::prelude::*;
use core::f64::consts::{FRAC_PI_2, TAU};

use super::{PureState, SpherePoint};
use crate::error::{Error, Result};
use crate::poly;

/// SU(2) element U = [[a, −b̄], [b, ā]], |a|² + |b|² = 1.
///
/// In the (α, φ) chart a = e^{iφ/2}/√(1+|α|²) and b = α·a. The pair (a, b)
/// covers the whole group, including a = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    a: Complex64,
    b: Complex64,
}

impl Default for Rotation {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Rotation {
    pub const IDENTITY: Self = Rotation { a: Complex64::new(1.0, 0.0), b: Complex64::new(0.0, 0.0) };

    /// ℛ(α, φ).
    pub fn new(alpha: Complex64, phi: f64) -> Self {
        let s = (1.0 + alpha.norm_sqr()).sqrt();
        let a = Complex64::from_polar(1.0 / s, phi / 2.0);
        Self { a, b: alpha * a }
    }

    /// From Cayley–Klein parameters, rescaled onto SU(2).
    pub fn from_cayley_klein(a: Complex64, b: Complex64) -> Result<Self> {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::param("Cayley-Klein parameters must be finite and not both zero"));
        }
        Ok(Self { a: a / n, b: b / n })
    }

    /// Right-handed rotation by `angle` about the z axis: φ ↦ φ + angle.
    pub fn about_z(angle: f64) -> Self {
        Self { a: Complex64::from_polar(1.0, angle / 2.0), b: Complex64::zero() }
    }

    /// Right-handed rotation by `angle` about the y axis, ℛ(tan(angle/2), 0).
    pub fn about_y(angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        Self { a: Complex64::new(c, 0.0), b: Complex64::new(s, 0.0) }
    }

    /// Right-handed rotation by `angle` about the x axis.
    pub fn about_x(angle: f64) -> Self {
        Self::about_z(-FRAC_PI_2).compose(&Self::about_y(angle)).compose(&Self::about_z(FRAC_PI_2))
    }

    /// ℛ(γ, 0) for finite γ, which carries the north pole to γ; a = 0 for the south pole.
    pub fn north_to(point: SpherePoint) -> Self {
        match point {
            SpherePoint::Finite(g) => Self::new(g, 0.0),
            SpherePoint::Infinity => Self { a: Complex64::zero(), b: Complex64::new(1.0, 0.0) },
        }
    }

    pub fn cayley_klein(&self) -> (Complex64, Complex64) {
        (self.a, self.b)
    }

    /// (α, φ) with φ ∈ [0, 2π); `None` when a = 0, which the chart misses.
    pub fn alpha_phi(&self) -> Option<(Complex64, f64)> {
        if self.a.is_zero() {
            return None;
        }
        let mut phi = 2.0 * self.a.arg();
        if phi < 0.0 {
            phi += TAU;
        }
        if phi >= TAU {
            phi -= TAU;
        }
        Some((self.b / self.a, phi))
    }

    /// The defining j = 1/2 matrix.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.a, -self.b.conj()], [self.b, self.a.conj()]]
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Rotation) -> Rotation {
        let (a1, b1, a2, b2) = (self.a, self.b, first.a, first.b);
        Rotation { a: a1 * a2 - b1.conj() * b2, b: b1 * a2 + a1.conj() * b2 }
    }

    pub fn inverse(&self) -> Rotation {
        Rotation { a: self.a.conj(), b: -self.b }
    }

    /// Möbius action γ ↦ (āγ + b)/(a − b̄γ) = (γ + αe^{iφ})/(e^{iφ} − ᾱγ).
    pub fn apply_point(&self, point: SpherePoint) -> SpherePoint {
        match point {
            SpherePoint::Finite(g) => {
                let den = self.a - self.b.conj() * g;
                if den.is_zero() {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite((self.a.conj() * g + self.b) / den)
                }
            }
            SpherePoint::Infinity => {
                if self.b.is_zero() {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(-self.a.conj() / self.b.conj())
                }
            }
        }
    }

    /// ψ′(γ) = Σ_k f_k (aγ − b)^k (ā + b̄γ)^{2j−k}; roots move by [`apply_point`](Self::apply_point).
    pub fn apply_state(&self, state: &PureState) -> PureState {
        let coeffs = self.apply_coefficients(state.coeffs());
        PureState::from_coefficients(state.twice_j(), coeffs).expect("rotation preserves the norm")
    }

    /// The same linear map on an arbitrary coefficient list of degree 2j.
    pub(crate) fn apply_coefficients(&self, f: &[Complex64]) -> Vec<Complex64> {
        let n = f.len() - 1;
        let num = [-self.b, self.a];
        let den = [self.a.conj(), self.b.conj()];
        let powers = |base: &[Complex64; 2]| {
            let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(n + 1);
            out.push(vec![Complex64::new(1.0, 0.0)]);
            for k in 1..=n {
                let next = poly::mul(&out[k - 1], base);
                out.push(next);
            }
            out
        };
        let pn = powers(&num);
        let pd = powers(&den);
        let mut coeffs = vec![Complex64::zero(); n + 1];
        for (k, &fk) in f.iter().enumerate() {
            if fk.is_zero() {
                continue;
            }
            for (i, x) in pn[k].iter().enumerate() {
                let fx = fk * x;
                for (l, y) in pd[n - k].iter().enumerate() {
                    coeffs[i + l] += fx * y;
                }
            }
        }
        coeffs
    }
}

pub fn mobius_rotate_point(rot: &Rotation, point: SpherePoint) -> SpherePoint {
    rot.apply_point(point)
}

pub fn rotate_state(rot: &Rotation, state: &PureState) -> PureState {
    rot.apply_state(state)
}
