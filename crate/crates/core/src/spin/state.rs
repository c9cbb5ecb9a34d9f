use crate::prelude::*;

use super::{binomial_row, SpherePoint, TwiceJ};
use crate::error::{Error, Result};
use crate::poly;

/// Spin-vector deficit 1 − |⟨J⟩|/j below which a state counts as coherent.
pub const COHERENCE_TOL: f64 = 1e-10;

/// Coefficients whose amplitude |f_k|/√C(2j,k) is below this are skipped
/// when fixing the global phase.
const PHASE_EPS: f64 = 1e-12;

/// Normalized spin-j pure state stored as Bargmann coefficients f_0..f_{2j},
/// ψ(γ) = Σ f_k γ^k.
///
/// Amplitudes a_k in the |m⟩ basis (k = j − m, m = j first) relate through
/// f_k = √C(2j,k)·conj(a_k). The global phase is fixed so that the first
/// non-negligible coefficient is real positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    twice_j: TwiceJ,
    coeffs: Vec<Complex64>,
}

impl PureState {
    /// Normalizes and phase-canonicalizes the given coefficients.
    pub fn from_coefficients(twice_j: TwiceJ, mut coeffs: Vec<Complex64>) -> Result<Self> {
        let n = twice_j.dim();
        if coeffs.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: coeffs.len() });
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let binom = binomial_row(twice_j);
        let norm2: f64 = coeffs.iter().zip(&binom).map(|(f, c)| f.norm_sqr() / c).sum();
        if norm2 == 0.0 || !norm2.is_finite() {
            return Err(Error::ZeroState);
        }
        let scale = norm2.sqrt().recip();
        let lead = coeffs
            .iter()
            .zip(&binom)
            .find(|(f, c)| f.norm() * scale / c.sqrt() > PHASE_EPS)
            .map(|(f, _)| *f)
            .unwrap_or_else(|| coeffs.iter().copied().find(|f| !f.is_zero()).unwrap_or(Complex64::new(1.0, 0.0)));
        let phase = lead.conj() / lead.norm();
        for f in coeffs.iter_mut() {
            *f *= phase * scale;
        }
        Ok(Self { twice_j, coeffs })
    }

    /// From amplitudes a_k = ⟨j−k|ψ⟩; normalizes and canonicalizes the phase.
    pub fn from_amplitudes(twice_j: TwiceJ, amps: &[Complex64]) -> Result<Self> {
        if amps.len() != twice_j.dim() {
            return Err(Error::LengthMismatch { expected: twice_j.dim(), found: amps.len() });
        }
        Self::from_coefficients(twice_j, bargmann_coefficients(twice_j, amps))
    }

    pub fn twice_j(&self) -> TwiceJ {
        self.twice_j
    }

    pub fn dim(&self) -> usize {
        self.twice_j.dim()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Amplitudes a_k = conj(f_k)/√C(2j,k), indexed from m = j down to m = −j.
    pub fn amplitudes(&self) -> Vec<Complex64> {
        amplitudes_of(self.twice_j, &self.coeffs)
    }

    /// ⟨self|other⟩ = Σ C(2j,k)^{-1} f_k conj(g_k).
    pub fn inner(&self, other: &PureState) -> Complex64 {
        let binom = binomial_row(self.twice_j);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .zip(&binom)
            .map(|((f, g), c)| f * g.conj() / c)
            .sum()
    }

    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Largest coefficient-wise difference after removing the relative global phase.
    pub fn phase_distance(&self, other: &PureState) -> f64 {
        if self.twice_j != other.twice_j {
            return f64::INFINITY;
        }
        let s = other.inner(self);
        let phase = if s.norm() > 0.0 { s / s.norm() } else { Complex64::new(1.0, 0.0) };
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(f, g)| (f - phase * g).norm())
            .fold(0.0, f64::max)
    }

    /// Bargmann function ψ(γ) by Horner's rule.
    pub fn bargmann(&self, gamma: Complex64) -> Complex64 {
        poly::horner(&self.coeffs, gamma)
    }

    pub fn husimi(&self, point: SpherePoint) -> f64 {
        husimi_of(self.twice_j, &self.coeffs, point)
    }

    /// Husimi function at u = cos θ and azimuth φ.
    pub fn husimi_polar(&self, u: f64, phi: f64) -> f64 {
        polar_amplitude(self.twice_j, &self.coeffs, u, phi).norm_sqr()
    }

    /// ⟨(Jx, Jy, Jz)⟩ in the |m⟩ basis.
    pub fn spin_expectation(&self) -> [f64; 3] {
        let a = self.amplitudes();
        let j = self.twice_j.j();
        let mut jz = 0.0;
        let mut jp = Complex64::zero();
        for (k, ak) in a.iter().enumerate() {
            let m = j - k as f64;
            jz += m * ak.norm_sqr();
            if k > 0 {
                jp += a[k - 1].conj() * ak * (j * (j + 1.0) - m * (m + 1.0)).sqrt();
            }
        }
        [jp.re, jp.im, jz]
    }

    /// 1 − |⟨J⟩|/j; zero exactly on coherent states (and for 2j = 0).
    pub fn coherence_deficit(&self) -> f64 {
        if self.twice_j.get() == 0 {
            return 0.0;
        }
        let v = self.spin_expectation();
        let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        (1.0 - len / self.twice_j.j()).max(0.0)
    }

    pub fn is_coherent(&self) -> bool {
        self.coherence_deficit() < COHERENCE_TOL
    }

    /// Direction of ⟨J⟩ expressed as a sphere point; for a coherent state this is its center.
    pub fn mean_spin_point(&self) -> Option<SpherePoint> {
        let v = self.spin_expectation();
        let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        (len > 0.0).then(|| SpherePoint::from_unit_vector([v[0], -v[1], v[2]]))
    }
}

/// Bargmann coefficients of an arbitrary (unnormalized) amplitude vector.
pub fn bargmann_coefficients(twice_j: TwiceJ, amps: &[Complex64]) -> Vec<Complex64> {
    let binom = binomial_row(twice_j);
    amps.iter().zip(&binom).map(|(a, c)| a.conj() * c.sqrt()).collect()
}

pub(crate) fn amplitudes_of(twice_j: TwiceJ, coeffs: &[Complex64]) -> Vec<Complex64> {
    let binom = binomial_row(twice_j);
    coeffs.iter().zip(&binom).map(|(f, c)| f.conj() / c.sqrt()).collect()
}

pub(crate) fn husimi_of(twice_j: TwiceJ, coeffs: &[Complex64], point: SpherePoint) -> f64 {
    let n = f64::from(twice_j.get());
    match point {
        SpherePoint::Infinity => coeffs[coeffs.len() - 1].norm_sqr(),
        SpherePoint::Finite(g) => {
            let r2 = g.norm_sqr();
            if r2 <= 1.0 {
                poly::horner(coeffs, g).norm_sqr() / (1.0 + r2).powf(n)
            } else {
                let w = g.inv();
                let rev = coeffs.iter().fold(Complex64::zero(), |acc, &c| acc * w + c);
                rev.norm_sqr() / (1.0 + w.norm_sqr()).powf(n)
            }
        }
    }
}

/// ψ(γ)/√𝒦(γ) up to a point-dependent phase common to all states, at u = cos θ.
///
/// Evaluates Σ f_k s^k c^{2j−k} e^{−ikφ} with s = sin(θ/2), c = cos(θ/2),
/// switching to the reversed polynomial in the southern hemisphere.
pub(crate) fn polar_amplitude(twice_j: TwiceJ, coeffs: &[Complex64], u: f64, phi: f64) -> Complex64 {
    let n = twice_j.get() as i32;
    let c = ((1.0 + u) * 0.5).max(0.0).sqrt();
    let s = ((1.0 - u) * 0.5).max(0.0).sqrt();
    let (sp, cp) = phi.sin_cos();
    if c >= s {
        let z = Complex64::new(cp, -sp) * (s / c);
        poly::horner(coeffs, z) * c.powi(n)
    } else {
        let w = Complex64::new(cp, sp) * (c / s);
        let rev = coeffs.iter().fold(Complex64::zero(), |acc, &f| acc * w + f);
        rev * Complex64::from_polar(s.powi(n), -f64::from(n) * phi)
    }
}

/// 𝒦(γ) = (1 + |γ|²)^{2j}.
pub fn kernel(point: SpherePoint, twice_j: TwiceJ) -> Result<f64> {
    match point {
        SpherePoint::Infinity => Err(Error::KernelAtInfinity),
        SpherePoint::Finite(g) => Ok((1.0 + g.norm_sqr()).powi(twice_j.get() as i32)),
    }
}

/// ln 𝒦(γ), finite for every finite γ and any j.
pub fn ln_kernel(point: SpherePoint, twice_j: TwiceJ) -> Result<f64> {
    match point {
        SpherePoint::Infinity => Err(Error::KernelAtInfinity),
        SpherePoint::Finite(g) => Ok(f64::from(twice_j.get()) * libm::log1p(g.norm_sqr())),
    }
}

/// Coherent state centered at `point`: f_k = C(2j,k) γ̄′^k / (1+|γ′|²)^j.
pub fn coherent_state(point: SpherePoint, twice_j: TwiceJ) -> PureState {
    let n = twice_j.dim();
    let mut coeffs = vec![Complex64::zero(); n];
    match point {
        SpherePoint::Infinity => coeffs[n - 1] = Complex64::new(1.0, 0.0),
        SpherePoint::Finite(g) if g.is_zero() => coeffs[0] = Complex64::new(1.0, 0.0),
        SpherePoint::Finite(g) => {
            let r = g.norm();
            let ln_r = r.ln();
            let arg = g.arg();
            let ln_norm = twice_j.j() * libm::log1p(r * r);
            let nn = f64::from(twice_j.get());
            for (k, f) in coeffs.iter_mut().enumerate() {
                let kf = k as f64;
                let mag = (crate::special::ln_binomial(nn, kf) + kf * ln_r - ln_norm).exp();
                *f = Complex64::from_polar(mag, -kf * arg);
            }
        }
    }
    PureState::from_coefficients(twice_j, coeffs).expect("coherent state is nonzero")
}

/// Eigenstate |m⟩ of J_z, with m = twice_m/2.
pub fn basis_state(twice_m: i64, twice_j: TwiceJ) -> Result<PureState> {
    let tj = i64::from(twice_j.get());
    if twice_m.abs() > tj || (tj - twice_m) % 2 != 0 {
        return Err(Error::ProjectionOutOfRange { twice_m, twice_j: twice_j.get() });
    }
    let k = ((tj - twice_m) / 2) as usize;
    let mut coeffs = vec![Complex64::zero(); twice_j.dim()];
    coeffs[k] = Complex64::new(crate::special::binomial(tj as u64, k as u64).sqrt(), 0.0);
    PureState::from_coefficients(twice_j, coeffs)
}

pub fn bargmann_eval(state: &PureState, gamma: Complex64) -> Complex64 {
    state.bargmann(gamma)
}

/// Husimi function ℋ = |ψ(γ)|²/𝒦(γ); at the south pole the limit |f_{2j}|².
pub fn husimi_eval(state: &PureState, point: SpherePoint) -> f64 {
    state.husimi(point)
}

pub fn amplitudes_from_state(state: &PureState) -> Vec<Complex64> {
    state.amplitudes()
}

pub fn state_from_amplitudes(twice_j: TwiceJ, amps: &[Complex64]) -> Result<PureState> {
    PureState::from_amplitudes(twice_j, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_coeffs(s: &PureState, expect: &[Complex64]) {
        for (a, b) in s.coeffs().iter().zip(expect) {
            assert!((a - b).norm() < 1e-14, "{:?} vs {:?}", s.coeffs(), expect);
        }
    }

    #[test]
    fn kernel_values() {
        let tj = TwiceJ::new(2);
        assert_eq!(kernel(SpherePoint::NORTH, TwiceJ::new(4)).unwrap(), 1.0);
        assert_eq!(kernel(c(1.0, 0.0).into(), tj).unwrap(), 4.0);
        assert_eq!(kernel(c(0.0, 2.0).into(), tj).unwrap(), 25.0);
        assert_eq!(kernel(SpherePoint::Infinity, tj), Err(Error::KernelAtInfinity));
        assert!(ln_kernel(c(1e3, 0.0).into(), TwiceJ::new(4000)).unwrap().is_finite());
    }

    #[test]
    fn coherent_state_examples() {
        let tj = TwiceJ::new(2);
        assert_coeffs(&coherent_state(SpherePoint::NORTH, tj), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_coeffs(&coherent_state(SpherePoint::Infinity, tj), &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_coeffs(&coherent_state(c(1.0, 0.0).into(), tj), &[c(0.5, 0.0), c(1.0, 0.0), c(0.5, 0.0)]);
    }

    #[test]
    fn basis_state_examples() {
        let tj = TwiceJ::new(2);
        assert_coeffs(&basis_state(0, tj).unwrap(), &[c(0.0, 0.0), c(SQRT_2, 0.0), c(0.0, 0.0)]);
        assert_eq!(basis_state(2, tj).unwrap(), coherent_state(SpherePoint::NORTH, tj));
        assert_eq!(basis_state(-2, tj).unwrap(), coherent_state(SpherePoint::Infinity, tj));
        assert!(basis_state(4, tj).is_err());
        assert!(basis_state(1, tj).is_err());
    }

    #[test]
    fn bargmann_examples() {
        let tj = TwiceJ::new(2);
        assert_eq!(coherent_state(SpherePoint::NORTH, tj).bargmann(c(3.0, -1.0)), c(1.0, 0.0));
        let v = coherent_state(c(1.0, 0.0).into(), tj).bargmann(c(1.0, 0.0));
        assert_abs_diff_eq!(v.re, 2.0, epsilon = 1e-14);
        let v = basis_state(0, tj).unwrap().bargmann(c(3.0, 0.0));
        assert_abs_diff_eq!(v.re, 3.0 * SQRT_2, epsilon = 1e-14);
    }

    #[test]
    fn husimi_examples() {
        let tj = TwiceJ::new(2);
        let north = coherent_state(SpherePoint::NORTH, tj);
        assert_eq!(north.husimi(SpherePoint::NORTH), 1.0);
        assert_abs_diff_eq!(north.husimi(c(0.6, 0.8).into()), 0.25, epsilon = 1e-15);
        assert_eq!(basis_state(0, tj).unwrap().husimi(SpherePoint::NORTH), 0.0);
        let g = c(-0.7, 2.1);
        let s = coherent_state(g.into(), TwiceJ::new(7));
        assert_abs_diff_eq!(s.husimi(g.into()), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn polar_amplitude_agrees_with_husimi() {
        let s = PureState::from_coefficients(
            TwiceJ::new(3),
            vec![c(0.3, 0.1), c(-1.0, 0.4), c(0.2, 0.9), c(0.5, -0.5)],
        )
        .unwrap();
        for &(u, phi) in &[(0.9, 0.3), (0.0, 2.0), (-0.4, 5.9), (-1.0, 1.0), (1.0, 0.0)] {
            let p = SpherePoint::from_polar(libm::acos(u), phi);
            assert_abs_diff_eq!(s.husimi_polar(u, phi), s.husimi(p), epsilon = 1e-14);
        }
    }

    #[test]
    fn amplitude_bridge() {
        let tj = TwiceJ::new(2);
        let s = PureState::from_amplitudes(tj, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(s, coherent_state(SpherePoint::NORTH, tj));
        let s = PureState::from_amplitudes(tj, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(s.coeffs()[1].re, SQRT_2, epsilon = 1e-15);
        assert!(PureState::from_amplitudes(tj, &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn phase_is_canonical() {
        let s = PureState::from_coefficients(TwiceJ::new(1), vec![c(0.0, 0.0), c(0.0, -3.0)]).unwrap();
        assert_coeffs(&s, &[c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(
            PureState::from_coefficients(TwiceJ::new(1), vec![c(0.0, 0.0); 2]),
            Err(Error::ZeroState)
        );
    }

    #[test]
    fn coherence_detection() {
        let s = coherent_state(c(0.4, -1.2).into(), TwiceJ::new(9));
        assert!(s.is_coherent());
        let p = s.mean_spin_point().unwrap().gamma().unwrap();
        assert!((p - c(0.4, -1.2)).norm() < 1e-12);
        assert!(!basis_state(1, TwiceJ::new(3)).unwrap().is_coherent());
    }
}
