//! Schrödinger evolution (ħ = 1) and time derivatives of the localization measures.

use core::fmt;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::entropy::{breakpoints, integer_order, moment, renyi_entropy, check_order};
use crate::error::{Error, Result};
use crate::prelude::*;
use crate::quadrature::{Cubature, QuadratureGrid};
use crate::spin::{amplitudes_of, bargmann_coefficients, polar_amplitude, roots_from_state, state_from_amplitudes, PureState, Rotation, SpherePoint, TwiceJ};

/// Largest tolerated |H − H†| entry.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Cubature settings for rate integrals, which may vanish.
const RATE_CUBATURE: Cubature = Cubature { rel_tol: 1e-10, abs_tol: 1e-12, max_intervals: 500 };

/// Largest error estimate accepted when the rate cubature misses its target.
const RATE_ACCEPT: f64 = 1e-9;

/// J_z, J_+ and J_− in the |m⟩ basis, ordered m = j, j−1, …, −j.
#[derive(Debug, Clone, PartialEq)]
pub struct Generators {
    pub jz: DMatrix<Complex64>,
    pub jplus: DMatrix<Complex64>,
    pub jminus: DMatrix<Complex64>,
}

impl Generators {
    pub fn jx(&self) -> DMatrix<Complex64> {
        (&self.jplus + &self.jminus) * Complex64::new(0.5, 0.0)
    }

    pub fn jy(&self) -> DMatrix<Complex64> {
        (&self.jplus - &self.jminus) * Complex64::new(0.0, -0.5)
    }
}

pub fn generators(twice_j: TwiceJ) -> Generators {
    let n = twice_j.dim();
    let j = twice_j.j();
    let m = |i: usize| j - i as f64;
    let jz = DMatrix::from_fn(n, n, |r, c| if r == c { Complex64::new(m(r), 0.0) } else { Complex64::zero() });
    // J+ |m⟩ = √(j(j+1) − m(m+1)) |m+1⟩, and |m+1⟩ sits one row up.
    let jplus = DMatrix::from_fn(n, n, |r, c| {
        if r + 1 == c {
            let mc = m(c);
            Complex64::new((j * (j + 1.0) - mc * (mc + 1.0)).max(0.0).sqrt(), 0.0)
        } else {
            Complex64::zero()
        }
    });
    let jminus = jplus.adjoint();
    Generators { jz, jplus, jminus }
}

/// Hermitian Hamiltonian on the spin-j space.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinHamiltonian {
    twice_j: TwiceJ,
    matrix: DMatrix<Complex64>,
}

impl SpinHamiltonian {
    pub fn new(twice_j: TwiceJ, matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = twice_j.dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::LengthMismatch { expected: n, found: matrix.nrows().max(matrix.ncols()) });
        }
        if matrix.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let dev = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let matrix = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(Self { twice_j, matrix })
    }

    pub fn jz(twice_j: TwiceJ) -> Self {
        Self { twice_j, matrix: generators(twice_j).jz }
    }

    pub fn jx(twice_j: TwiceJ) -> Self {
        Self { twice_j, matrix: generators(twice_j).jx() }
    }

    /// a J_z + b J_+ + b̄ J_−, which generates rotations.
    pub fn rotation(twice_j: TwiceJ, a: f64, b: Complex64) -> Self {
        let g = generators(twice_j);
        let matrix = g.jz * Complex64::new(a, 0.0) + g.jplus * b + g.jminus * b.conj();
        Self { twice_j, matrix }
    }

    /// Gaussian hermitian ensemble: diagonal N(0,1), off-diagonal real and imaginary parts N(0,1/2).
    pub fn random_gue<R: Rng + ?Sized>(twice_j: TwiceJ, rng: &mut R) -> Self {
        let n = twice_j.dim();
        let mut matrix = DMatrix::zeros(n, n);
        for r in 0..n {
            let d: f64 = rng.sample(StandardNormal);
            matrix[(r, r)] = Complex64::new(d, 0.0);
            for c in r + 1..n {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let z = Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2;
                matrix[(r, c)] = z;
                matrix[(c, r)] = z.conj();
            }
        }
        Self { twice_j, matrix }
    }

    pub fn twice_j(&self) -> TwiceJ {
        self.twice_j
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    fn check(&self, state: &PureState) -> Result<()> {
        if state.twice_j() != self.twice_j {
            return Err(Error::LengthMismatch { expected: self.twice_j.dim(), found: state.dim() });
        }
        Ok(())
    }

    /// H applied to an amplitude vector.
    pub fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let v = DVector::from_column_slice(amps);
        (&self.matrix * v).iter().copied().collect()
    }
}

/// e^{−iHt} through the eigendecomposition of H.
#[derive(Debug, Clone)]
pub struct Propagator {
    twice_j: TwiceJ,
    vectors: DMatrix<Complex64>,
    values: Vec<f64>,
}

impl Propagator {
    pub fn new(h: &SpinHamiltonian) -> Result<Self> {
        let eig = nalgebra::linalg::SymmetricEigen::try_new(h.matrix.clone(), f64::EPSILON, 10_000).ok_or(Error::EigenFailure)?;
        Ok(Self { twice_j: h.twice_j, vectors: eig.eigenvectors, values: eig.eigenvalues.iter().copied().collect() })
    }

    pub fn evolve_amplitudes(&self, amps: &[Complex64], t: f64) -> Vec<Complex64> {
        let v = DVector::from_column_slice(amps);
        let mut c = self.vectors.adjoint() * v;
        for (ci, &l) in c.iter_mut().zip(&self.values) {
            *ci *= Complex64::from_polar(1.0, -l * t);
        }
        (&self.vectors * c).iter().copied().collect()
    }

    pub fn evolve(&self, state: &PureState, t: f64) -> Result<PureState> {
        if state.twice_j() != self.twice_j {
            return Err(Error::LengthMismatch { expected: self.twice_j.dim(), found: state.dim() });
        }
        let a = amplitudes_of(state.twice_j(), state.coeffs());
        state_from_amplitudes(self.twice_j, &self.evolve_amplitudes(&a, t))
    }
}

/// |ψ(t)⟩ = e^{−iHt}|ψ⟩.
pub fn evolve(state: &PureState, h: &SpinHamiltonian, t: f64) -> Result<PureState> {
    Propagator::new(h)?.evolve(state, t)
}

/// Bargmann coefficients of ψ, Hψ and H²ψ.
struct Flow {
    twice_j: TwiceJ,
    psi: Vec<Complex64>,
    h: Vec<Complex64>,
    h2: Vec<Complex64>,
}

/// ℋ, dℋ/dt and d²ℋ/dt² at one point.
#[derive(Debug, Clone, Copy)]
struct Local {
    h: f64,
    d1: f64,
    d2: f64,
}

impl Flow {
    fn new(state: &PureState, ham: &SpinHamiltonian) -> Result<Self> {
        ham.check(state)?;
        let tj = state.twice_j();
        let a = amplitudes_of(tj, state.coeffs());
        let ha = ham.apply(&a);
        let h2a = ham.apply(&ha);
        Ok(Self { twice_j: tj, psi: state.coeffs().to_vec(), h: bargmann_coefficients(tj, &ha), h2: bargmann_coefficients(tj, &h2a) })
    }

    /// The flow in the chart that puts `zero` at γ = 0, with its `multiplicity` lowest coefficients cleared.
    ///
    /// All three polynomials pick up the same phase, so ℋ and its derivatives are unchanged.
    fn centered(&self, zero: SpherePoint, multiplicity: usize) -> (Flow, PureState) {
        let rot = Rotation::north_to(zero).inverse();
        let mut psi = rot.apply_coefficients(&self.psi);
        let scale = psi.iter().map(|f| f.norm()).fold(0.0, f64::max);
        if psi[..multiplicity].iter().all(|f| f.norm() < 1e-12 * scale) {
            psi[..multiplicity].fill(Complex64::new(0.0, 0.0));
        }
        let state = PureState::from_coefficients(self.twice_j, psi.clone()).expect("rotation preserves the norm");
        let flow = Flow { twice_j: self.twice_j, psi, h: rot.apply_coefficients(&self.h), h2: rot.apply_coefficients(&self.h2) };
        (flow, state)
    }

    fn at(&self, u: f64, phi: f64) -> Local {
        let a = polar_amplitude(self.twice_j, &self.psi, u, phi);
        let b = polar_amplitude(self.twice_j, &self.h, u, phi);
        let c = polar_amplitude(self.twice_j, &self.h2, u, phi);
        let ab = a * b.conj();
        Local { h: a.norm_sqr(), d1: 2.0 * ab.im, d2: 2.0 * b.norm_sqr() - 2.0 * (a * c.conj()).re }
    }
}

fn point_polar(point: SpherePoint) -> (f64, f64) {
    let (theta, phi) = point.polar();
    (theta.cos(), phi)
}

/// dℋ/dt = 2 Im[⟨γ|ψ⟩⟨ψ|H|γ⟩] at a point.
pub fn husimi_time_derivative(state: &PureState, h: &SpinHamiltonian, point: SpherePoint) -> Result<f64> {
    let (u, phi) = point_polar(point);
    Ok(Flow::new(state, h)?.at(u, phi).d1)
}

/// d²ℋ/dt² at a point.
pub fn husimi_second_derivative(state: &PureState, h: &SpinHamiltonian, point: SpherePoint) -> Result<f64> {
    let (u, phi) = point_polar(point);
    Ok(Flow::new(state, h)?.at(u, phi).d2)
}

/// dψ(γ)/dt of the Bargmann function for the unnormalized amplitudes of `state`.
pub fn bargmann_time_derivative(state: &PureState, h: &SpinHamiltonian, gamma: Complex64) -> Result<Complex64> {
    let flow = Flow::new(state, h)?;
    let val = flow.h.iter().rev().fold(Complex64::zero(), |acc, &f| acc * gamma + f);
    Ok(Complex64::new(0.0, 1.0) * val)
}

/// Which measure a rate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateKind {
    S,
    W,
    Z,
    Y,
}

impl RateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RateKind::S => "S",
            RateKind::W => "W",
            RateKind::Z => "Z",
            RateKind::Y => "Y",
        }
    }
}

impl fmt::Display for RateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn powf(x: f64, e: f64) -> f64 {
    match integer_order(e) {
        Some(k) => x.powi(k as i32),
        None if e == 0.0 => 1.0,
        None => {
            if x > 0.0 {
                x.powf(e)
            } else {
                0.0
            }
        }
    }
}

/// ∫ g(ℋ, ℋ', ℋ'') dμ: exact product grid when `order` is set, adaptive otherwise.
fn integrate(state: &PureState, flow: &Flow, order: Option<u32>, g: impl Fn(Local) -> f64) -> Result<f64> {
    match order {
        Some(k) => Ok(QuadratureGrid::for_order(state.twice_j(), k.max(1)).integrate(|u, p| g(flow.at(u, p)))),
        None => {
            // A multiple zero is moved to the north pole, where the integrand is smooth in φ.
            let rotated = highest_zero(state).filter(|&(_, m)| m > 1).map(|(p, m)| flow.centered(p, m));
            let (flow, points) = match &rotated {
                Some((f, s)) => (f, breakpoints(s)),
                None => (flow, breakpoints(state)),
            };
            match RATE_CUBATURE.integrate_sphere(|u, p| g(flow.at(u, p)), &points) {
                Ok(e) => Ok(e.value),
                // Singular integrands stall at the roundoff floor; a small error estimate is still usable.
                Err(Error::NonConvergence { estimate, error }) if error <= RATE_ACCEPT * estimate.abs().max(1.0) => Ok(estimate),
                Err(e) => Err(e),
            }
        }
    }
}

fn dual_prefactor(state: &PureState) -> Result<f64> {
    let tj = state.twice_j().get();
    if tj == 0 {
        return Err(Error::DualUndefined);
    }
    Ok(state.dim() as f64 / f64::from(tj))
}

fn dual_moment_grid(state: &PureState, q: u32) -> f64 {
    QuadratureGrid::for_order(state.twice_j(), q).integrate(|u, p| (1.0 - state.husimi_polar(u, p)).powi(q as i32))
}

/// Time derivative of S^(q), W^(q), Z^(q) or Y^(q) under H.
pub fn entropy_rate(state: &PureState, h: &SpinHamiltonian, q: f64, kind: RateKind) -> Result<f64> {
    check_order(q)?;
    let flow = Flow::new(state, h)?;
    let n = state.dim() as f64;
    let order = integer_order(q);
    match kind {
        RateKind::W => Ok(q * n * integrate(state, &flow, order, |l| powf(l.h, q - 1.0) * l.d1)?),
        RateKind::S if q == 1.0 => Ok(-n * integrate(state, &flow, None, |l| if l.h > 0.0 { l.h.ln() * l.d1 } else { 0.0 })?),
        RateKind::S => {
            let dw = q * n * integrate(state, &flow, order, |l| powf(l.h, q - 1.0) * l.d1)?;
            Ok(dw / ((1.0 - q) * moment(state, q)?))
        }
        RateKind::Y => {
            let pre = dual_prefactor(state)?;
            Ok(-q * pre * integrate(state, &flow, order, |l| powf(1.0 - l.h, q - 1.0) * l.d1)?)
        }
        RateKind::Z if q == 1.0 => {
            let pre = dual_prefactor(state)?;
            Ok(pre * integrate(state, &flow, None, |l| if l.h < 1.0 { (1.0 - l.h).ln() * l.d1 } else { 0.0 })?)
        }
        RateKind::Z => {
            let pre = dual_prefactor(state)?;
            let dy = -q * pre * integrate(state, &flow, order, |l| powf(1.0 - l.h, q - 1.0) * l.d1)?;
            let y = match order {
                Some(k) => pre * dual_moment_grid(state, k),
                None => crate::entropy::dual_moment(state, q)?,
            };
            Ok(dy / ((1.0 - q) * y))
        }
    }
}

/// Distinct zeros of the Husimi function with their multiplicities.
fn zero_multiplicities(state: &PureState) -> Vec<(SpherePoint, usize)> {
    let mut out: Vec<(SpherePoint, usize)> = Vec::new();
    for p in roots_from_state(state).points() {
        match out.iter_mut().find(|(o, _)| o.chordal_distance(&p) < 1e-6) {
            Some((_, m)) => *m += 1,
            None => out.push((p, 1)),
        }
    }
    out
}

fn highest_zero(state: &PureState) -> Option<(SpherePoint, usize)> {
    zero_multiplicities(state).into_iter().max_by_key(|&(_, m)| m)
}

/// True when some zero of multiplicity m has m(1 − q) ≥ 1 and H moves weight onto it.
///
/// Near such a zero ℋ^{q−1}ℋ'' + (q−1)ℋ^{q−2}ℋ'² averages to 2q|A_Hψ|²ℋ^{q−1} > 0,
/// which is not integrable.
fn curvature_diverges(state: &PureState, flow: &Flow, q: f64) -> bool {
    if q >= 1.0 {
        return false;
    }
    let scale = flow.h.iter().map(|f| f.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return false;
    }
    zero_multiplicities(state).into_iter().any(|(p, m)| {
        if m as f64 * (1.0 - q) < 1.0 {
            return false;
        }
        let (u, phi) = point_polar(p);
        polar_amplitude(flow.twice_j, &flow.h, u, phi).norm() > 1e-10 * scale
    })
}

/// Second time derivative of W^(q) or Y^(q) under H.
///
/// For q < 1 the W integral diverges at zeros of high multiplicity that the
/// flow lifts off zero; the result is then +∞.
pub fn moment_second_derivative(state: &PureState, h: &SpinHamiltonian, q: f64, kind: RateKind) -> Result<f64> {
    check_order(q)?;
    let flow = Flow::new(state, h)?;
    let n = state.dim() as f64;
    let order = integer_order(q);
    match kind {
        RateKind::W if curvature_diverges(state, &flow, q) => Ok(f64::INFINITY),
        RateKind::W => Ok(q * n
            * integrate(state, &flow, order, |l| {
                let curv = if q == 1.0 { 0.0 } else { (q - 1.0) * powf(l.h, q - 2.0) * l.d1 * l.d1 };
                curv + powf(l.h, q - 1.0) * l.d2
            })?),
        RateKind::Y => {
            let pre = dual_prefactor(state)?;
            Ok(q * pre
                * integrate(state, &flow, order, |l| {
                    let x = 1.0 - l.h;
                    let curv = if q == 1.0 { 0.0 } else { (q - 1.0) * powf(x, q - 2.0) * l.d1 * l.d1 };
                    curv - powf(x, q - 1.0) * l.d2
                })?)
        }
        other => Err(Error::param(alloc::format!("second derivatives are defined for W and Y, not {other}"))),
    }
}

/// First and second moment derivatives at the north-pole coherent state for one q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalityRow {
    pub q: f64,
    pub max_abs_first: f64,
    pub min_second: f64,
    pub max_second: f64,
    /// |dW/dt| < 1e-8, and d²W/dt² ≤ 1e-8 for q > 1 or ≥ −1e-8 for q < 1.
    pub sign_pattern_ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalityReport {
    pub twice_j: TwiceJ,
    pub n_hamiltonians: usize,
    pub rows: Vec<ExtremalityRow>,
}

impl ExtremalityReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.sign_pattern_ok)
    }
}

/// Derivative tolerance for the extremality checks.
pub const EXTREMALITY_TOL: f64 = 1e-8;

/// Tabulates dW^(q)/dt and d²W^(q)/dt² at the north pole for random Hamiltonians.
pub fn extremality_report<R: Rng + ?Sized>(twice_j: TwiceJ, qs: &[f64], n_hamiltonians: usize, rng: &mut R) -> Result<ExtremalityReport> {
    let state = crate::spin::coherent_state(SpherePoint::NORTH, twice_j);
    let hams: Vec<SpinHamiltonian> = (0..n_hamiltonians).map(|_| SpinHamiltonian::random_gue(twice_j, rng)).collect();
    let mut rows = Vec::with_capacity(qs.len());
    for &q in qs {
        let mut row = ExtremalityRow { q, max_abs_first: 0.0, min_second: f64::INFINITY, max_second: f64::NEG_INFINITY, sign_pattern_ok: true };
        for h in &hams {
            let d1 = entropy_rate(&state, h, q, RateKind::W)?;
            let d2 = moment_second_derivative(&state, h, q, RateKind::W)?;
            row.max_abs_first = row.max_abs_first.max(d1.abs());
            row.min_second = row.min_second.min(d2);
            row.max_second = row.max_second.max(d2);
        }
        let second_ok = if q > 1.0 {
            row.max_second <= EXTREMALITY_TOL
        } else if q < 1.0 {
            row.min_second >= -EXTREMALITY_TOL
        } else {
            row.max_second.abs().max(row.min_second.abs()) <= EXTREMALITY_TOL
        };
        row.sign_pattern_ok = row.max_abs_first < EXTREMALITY_TOL && (n_hamiltonians == 0 || second_ok);
        rows.push(row);
    }
    Ok(ExtremalityReport { twice_j, n_hamiltonians, rows })
}

/// S^(q) and W^(q) sampled along the flow, with analytic and finite-difference dS/dt.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTimeSeries {
    pub q: f64,
    pub times: Vec<f64>,
    pub s: Vec<f64>,
    pub w: Vec<f64>,
    pub ds_dt: Vec<f64>,
    pub ds_dt_fd: Vec<f64>,
}

impl EntropyTimeSeries {
    /// Largest |analytic − finite-difference| rate.
    pub fn max_rate_deviation(&self) -> f64 {
        self.ds_dt.iter().zip(&self.ds_dt_fd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Largest |S(t) − S(0)|.
    pub fn max_entropy_drift(&self) -> f64 {
        let s0 = self.s.first().copied().unwrap_or(0.0);
        self.s.iter().map(|s| (s - s0).abs()).fold(0.0, f64::max)
    }
}

/// Step of the five-point finite-difference stencil.
pub const FD_STEP: f64 = 1e-3;

/// Five-point central difference of S^(q) along the flow at time t.
pub fn entropy_rate_fd(prop: &Propagator, state: &PureState, q: f64, t: f64) -> Result<f64> {
    let s = |dt: f64| -> Result<f64> { renyi_entropy(&prop.evolve(state, t + dt)?, q) };
    let h = FD_STEP;
    Ok((-s(2.0 * h)? + 8.0 * s(h)? - 8.0 * s(-h)? + s(-2.0 * h)?) / (12.0 * h))
}

/// Samples n_steps + 1 equally spaced times in [0, t_max].
pub fn entropy_time_series(state: &PureState, h: &SpinHamiltonian, q: f64, t_max: f64, n_steps: usize) -> Result<EntropyTimeSeries> {
    check_order(q)?;
    if t_max.is_nan() || t_max <= 0.0 || n_steps == 0 {
        return Err(Error::param("need t_max > 0 and at least one step"));
    }
    h.check(state)?;
    let prop = Propagator::new(h)?;
    let mut out = EntropyTimeSeries { q, times: Vec::new(), s: Vec::new(), w: Vec::new(), ds_dt: Vec::new(), ds_dt_fd: Vec::new() };
    for i in 0..=n_steps {
        let t = t_max * i as f64 / n_steps as f64;
        let psi = prop.evolve(state, t)?;
        out.times.push(t);
        out.s.push(renyi_entropy(&psi, q)?);
        out.w.push(moment(&psi, q)?);
        out.ds_dt.push(entropy_rate(&psi, h, q, RateKind::S)?);
        out.ds_dt_fd.push(entropy_rate_fd(&prop, state, q, t)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{haar_random_state, sample_rng};
    use crate::spin::{basis_state, coherent_state};

    fn max_dev(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn commutators() {
        for tj in [1u32, 4, 7] {
            let g = generators(TwiceJ::new(tj));
            let comm = &g.jplus * &g.jminus - &g.jminus * &g.jplus;
            assert!(max_dev(&comm, &(&g.jz * Complex64::new(2.0, 0.0))) < 1e-12);
            let zp = &g.jz * &g.jplus - &g.jplus * &g.jz;
            assert!(max_dev(&zp, &g.jplus) < 1e-12);
            let (jx, jy) = (g.jx(), g.jy());
            let j2 = &jx * &jx + &jy * &jy + &g.jz * &g.jz;
            let j = TwiceJ::new(tj).j();
            let id = DMatrix::<Complex64>::identity(tj as usize + 1, tj as usize + 1) * Complex64::new(j * (j + 1.0), 0.0);
            assert!(max_dev(&j2, &id) < 1e-12);
        }
        let g = generators(TwiceJ::new(1));
        assert!((g.jx()[(0, 1)] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((g.jy()[(0, 1)] - Complex64::new(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn lowering_annihilates() {
        let tj = TwiceJ::new(4);
        let g = generators(tj);
        let mut v = DVector::<Complex64>::zeros(5);
        v[0] = Complex64::new(1.0, 0.0);
        for _ in 0..5 {
            v = &g.jminus * v;
        }
        assert!(v.norm() == 0.0);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(SpinHamiltonian::new(TwiceJ::new(1), m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn group_law_and_unitarity() {
        let tj = TwiceJ::new(5);
        let h = SpinHamiltonian::random_gue(tj, &mut sample_rng(3, 0));
        let psi = haar_random_state(tj, &mut sample_rng(3, 1));
        let p = Propagator::new(&h).unwrap();
        let a = p.evolve(&p.evolve(&psi, 0.3).unwrap(), 0.45).unwrap();
        let b = p.evolve(&psi, 0.75).unwrap();
        assert!(a.phase_distance(&b) < 1e-12);
        assert!(p.evolve(&psi, 0.0).unwrap().phase_distance(&psi) < 1e-13);
    }

    #[test]
    fn husimi_rate_matches_fd() {
        let tj = TwiceJ::new(3);
        let h = SpinHamiltonian::random_gue(tj, &mut sample_rng(4, 0));
        let psi = haar_random_state(tj, &mut sample_rng(4, 1));
        let p = Propagator::new(&h).unwrap();
        let pt = SpherePoint::from_polar(1.1, 2.3);
        let f = |t: f64| p.evolve(&psi, t).unwrap().husimi(pt);
        let dt = 1e-4;
        let fd1 = (f(dt) - f(-dt)) / (2.0 * dt);
        let fd2 = (f(dt) - 2.0 * f(0.0) + f(-dt)) / (dt * dt);
        assert!((husimi_time_derivative(&psi, &h, pt).unwrap() - fd1).abs() < 1e-7);
        assert!((husimi_second_derivative(&psi, &h, pt).unwrap() - fd2).abs() < 1e-5);
    }

    #[test]
    fn eigenstate_is_stationary() {
        let tj = TwiceJ::new(4);
        let h = SpinHamiltonian::jz(tj);
        let psi = basis_state(2, tj).unwrap();
        for kind in [RateKind::W, RateKind::S, RateKind::Y, RateKind::Z] {
            assert!(entropy_rate(&psi, &h, 2.0, kind).unwrap().abs() < 1e-12);
        }
        assert!(husimi_time_derivative(&psi, &h, SpherePoint::from_polar(0.4, 0.3)).unwrap().abs() < 1e-14);
    }

    #[test]
    fn coherent_first_derivative_vanishes() {
        let tj = TwiceJ::new(2);
        let psi = coherent_state(SpherePoint::NORTH, tj);
        let h = SpinHamiltonian::random_gue(tj, &mut sample_rng(9, 0));
        for q in [0.5, 1.0, 2.0, 3.0] {
            assert!(entropy_rate(&psi, &h, q, RateKind::W).unwrap().abs() < 1e-8, "q={q}");
        }
        assert!(moment_second_derivative(&psi, &h, 2.0, RateKind::W).unwrap() <= 1e-8);
        assert!(moment_second_derivative(&psi, &h, 0.5, RateKind::W).unwrap() >= -1e-8);
        let jz = SpinHamiltonian::jz(tj);
        assert!(moment_second_derivative(&psi, &jz, 2.0, RateKind::W).unwrap().abs() < 1e-12);
    }

    #[test]
    fn coherent_rate_vanishes_away_from_the_poles() {
        let tj = TwiceJ::new(4);
        let psi = coherent_state(SpherePoint::Finite(Complex64::new(0.5, 0.5)), tj);
        let h = SpinHamiltonian::random_gue(tj, &mut sample_rng(3, 1));
        for q in [0.25, 0.5, 1.5] {
            for kind in [RateKind::W, RateKind::S] {
                assert!(entropy_rate(&psi, &h, q, kind).unwrap().abs() < 1e-10, "q={q} {kind}");
            }
        }
    }

    #[test]
    fn bargmann_rate_matches_fd() {
        let tj = TwiceJ::new(3);
        let h = SpinHamiltonian::random_gue(tj, &mut sample_rng(5, 0));
        let psi = haar_random_state(tj, &mut sample_rng(5, 1));
        let p = Propagator::new(&h).unwrap();
        let a = amplitudes_of(tj, psi.coeffs());
        let g = Complex64::new(0.3, -0.7);
        let eval = |t: f64| {
            let f = bargmann_coefficients(tj, &p.evolve_amplitudes(&a, t));
            f.iter().rev().fold(Complex64::zero(), |acc, &c| acc * g + c)
        };
        let dt = 1e-5;
        let fd = (eval(dt) - eval(-dt)) / (2.0 * dt);
        assert!((bargmann_time_derivative(&psi, &h, g).unwrap() - fd).norm() < 1e-7);
    }
}
