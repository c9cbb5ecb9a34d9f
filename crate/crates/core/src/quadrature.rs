//! Sphere quadrature against dμ = (1/4π) sin θ dθ dφ.
//!
//! [`QuadratureGrid`] is a Gauss–Legendre × trapezoid product rule, exact for
//! the trigonometric polynomials that integer Husimi moments produce.
//! [`Cubature`] is a nested adaptive Gauss–Kronrod rule with breakpoints for
//! integrands that are only Hölder-continuous at Husimi zeros.

use core::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::prelude::*;

/// Gauss–Legendre nodes (ascending) and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-16 * z.abs().max(1.0) {
                break;
            }
        }
        let (_, dp) = legendre(n, z);
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// P_n(z) and P_n'(z) by the three-term recurrence.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (z * p1 - p0) / (z * z - 1.0))
}

/// Product rule: Gauss–Legendre in u = cos θ, uniform trapezoid in φ.
///
/// Exact for polynomials of degree ≤ 2·n_u − 1 in u times trigonometric
/// polynomials of degree ≤ n_phi − 1 in φ; the stated
/// [`exact_trig_degree`](Self::exact_trig_degree) is the conservative ⌊(n_phi−1)/2⌋.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    u: Vec<f64>,
    wu: Vec<f64>,
    phi: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(n_u: usize, n_phi: usize) -> Result<Self> {
        if n_u == 0 || n_phi == 0 {
            return Err(Error::param("quadrature grid needs at least one node per axis"));
        }
        let (u, w) = gauss_legendre(n_u);
        let wu = w.into_iter().map(|x| x / 2.0).collect();
        let phi = (0..n_phi).map(|k| TAU * k as f64 / n_phi as f64).collect();
        Ok(Self { u, wu, phi })
    }

    /// Grid that integrates ℋ^q exactly for integer q: n_u = ⌊qj⌋ + 1, n_phi = 4qj + 2.
    pub fn for_order(twice_j: crate::TwiceJ, q: u32) -> Self {
        let qn = q as usize * twice_j.get() as usize;
        Self::new(qn / 2 + 1, 2 * qn + 2).expect("node counts are positive")
    }

    pub fn n_u(&self) -> usize {
        self.u.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phi.len()
    }

    pub fn exact_u_degree(&self) -> usize {
        2 * self.u.len() - 1
    }

    pub fn exact_trig_degree(&self) -> usize {
        (self.phi.len() - 1) / 2
    }

    pub fn u_nodes(&self) -> &[f64] {
        &self.u
    }

    pub fn phi_nodes(&self) -> &[f64] {
        &self.phi
    }

    /// (u, φ, weight) triples; weights sum to one.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let wphi = 1.0 / self.phi.len() as f64;
        self.u
            .iter()
            .zip(&self.wu)
            .flat_map(move |(&u, &wu)| self.phi.iter().map(move |&p| (u, p, wu * wphi)))
    }

    /// ∫ f(u, φ) dμ.
    pub fn integrate(&self, mut f: impl FnMut(f64, f64) -> f64) -> f64 {
        let wphi = 1.0 / self.phi.len() as f64;
        let mut total = 0.0;
        for (&u, &wu) in self.u.iter().zip(&self.wu) {
            let ring: f64 = self.phi.iter().map(|&p| f(u, p)).sum();
            total += wu * wphi * ring;
        }
        total
    }
}

/// Integral estimate with an error bound and the evaluation count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Nested adaptive Gauss–Kronrod (7/15) cubature on the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cubature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Subinterval cap for each one-dimensional pass.
    pub max_intervals: usize,
}

impl Default for Cubature {
    fn default() -> Self {
        Self { rel_tol: 1e-12, abs_tol: 1e-15, max_intervals: 500 }
    }
}

/// Half-width in u of the band of lines that use a point's φ as a breakpoint.
pub const PHI_BREAK_BAND: f64 = 0.2;

impl Cubature {
    pub fn with_tolerance(rel_tol: f64) -> Self {
        Self { rel_tol, ..Self::default() }
    }

    /// ∫ f(u, φ) dμ, subdividing at the given (u, φ) points.
    ///
    /// Every point splits the u range; its φ splits only the lines with
    /// |u − u_k| < [`PHI_BREAK_BAND`]. Inner-pass errors are carried into the
    /// outer error budget.
    pub fn integrate_sphere(&self, mut f: impl FnMut(f64, f64) -> f64, points: &[(f64, f64)]) -> Result<Estimate> {
        let us: Vec<f64> = points.iter().map(|p| p.0).collect();
        let ub = break_list(-1.0, 1.0, &us);
        let inner = Self { rel_tol: self.rel_tol * 0.1, abs_tol: self.abs_tol * 0.1, ..*self };
        let mut evaluations = 0;
        let mut phis = Vec::with_capacity(points.len());
        let outer = adapt(
            &mut |u| {
                phis.clear();
                phis.extend(points.iter().filter(|p| (p.0 - u).abs() < PHI_BREAK_BAND).map(|p| p.1));
                let pb = break_list(0.0, TAU, &phis);
                let e = adapt(&mut |p| (f(u, p), 0.0), &pb, &inner);
                evaluations += e.evaluations;
                (e.value / TAU, e.error / TAU)
            },
            &ub,
            self,
        );
        let value = outer.value / 2.0;
        let error = outer.error / 2.0;
        if !outer.converged {
            return Err(Error::NonConvergence { estimate: value, error });
        }
        Ok(Estimate { value, error, evaluations })
    }

    /// One-dimensional ∫_a^b f(x) dx with breakpoints.
    pub fn integrate_1d(&self, mut f: impl FnMut(f64) -> f64, a: f64, b: f64, breaks: &[f64]) -> Result<Estimate> {
        let bl = break_list(a, b, breaks);
        let e = adapt(&mut |x| (f(x), 0.0), &bl, self);
        if !e.converged {
            return Err(Error::NonConvergence { estimate: e.value, error: e.error });
        }
        Ok(Estimate { value: e.value, error: e.error, evaluations: e.evaluations })
    }
}

fn break_list(a: f64, b: f64, extra: &[f64]) -> Vec<f64> {
    let span = b - a;
    let mut v = vec![a, b];
    v.extend(extra.iter().copied().filter(|&x| x > a && x < b && x.is_finite()));
    v.sort_by(f64::total_cmp);
    v.dedup_by(|x, y| (*x - *y).abs() <= 1e-13 * span);
    v
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    splittable: bool,
}

struct Outcome {
    value: f64,
    error: f64,
    evaluations: usize,
    converged: bool,
}

/// Kronrod-15 estimate and error on [a, b]; `f` returns (value, error of that value).
fn gk15(f: &mut dyn FnMut(f64) -> (f64, f64), a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let (fc, ec) = f(c);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = fc.abs() * WGK[7];
    let mut inner = ec * WGK[7];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, e1) = f(c - dx);
        let (f2, e2) = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        inner += WGK[j] * (e1 + e2);
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let res_asc = res_asc * h.abs();
    let res_abs = res_abs * h.abs();
    let mut err = ((res_k - res_g) * h).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if floor > err {
        err = floor;
    }
    (res_k * h, err + inner * h.abs())
}

fn adapt(f: &mut dyn FnMut(f64) -> (f64, f64), breaks: &[f64], cfg: &Cubature) -> Outcome {
    let mut segs: Vec<Segment> = Vec::new();
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        let (v, e) = gk15(f, w[0], w[1]);
        evaluations += 15;
        segs.push(Segment { a: w[0], b: w[1], value: v, error: e, splittable: true });
    }
    loop {
        let value: f64 = segs.iter().map(|s| s.value).sum();
        let error: f64 = segs.iter().map(|s| s.error).sum();
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= target {
            return Outcome { value, error, evaluations, converged: true };
        }
        let worst = segs
            .iter()
            .enumerate()
            .filter(|(_, s)| s.splittable)
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            // Only roundoff-limited pieces remain.
            let converged = error <= 1e3 * target;
            return Outcome { value, error, evaluations, converged };
        };
        if segs.len() >= cfg.max_intervals {
            return Outcome { value, error, evaluations, converged: false };
        }
        let (a, b) = (segs[i].a, segs[i].b);
        let m = 0.5 * (a + b);
        if (b - a) <= 1e-12 * (1.0 + a.abs().max(b.abs())) {
            segs[i].splittable = false;
            continue;
        }
        let (v1, e1) = gk15(f, a, m);
        let (v2, e2) = gk15(f, m, b);
        evaluations += 30;
        segs[i] = Segment { a, b: m, value: v1, error: e1, splittable: true };
        segs.push(Segment { a: m, b, value: v2, error: e2, splittable: true });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn legendre_nodes_integrate_polynomials() {
        for n in [1usize, 2, 5, 16, 40, 129] {
            let (x, w) = gauss_legendre(n);
            assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            let deg = 2 * n - 1;
            let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert_abs_diff_eq!(approx, exact, epsilon = 1e-13);
        }
    }

    #[test]
    fn grid_measure_is_normalized() {
        let g = QuadratureGrid::new(7, 13).unwrap();
        assert_abs_diff_eq!(g.integrate(|_, _| 1.0), 1.0, epsilon = 1e-14);
        // ∫ cos²θ dμ = 1/3, ∫ sin²θ cos²φ dμ = 1/3
        assert_abs_diff_eq!(g.integrate(|u, _| u * u), 1.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g.integrate(|u, p| (1.0 - u * u) * p.cos().powi(2)), 1.0 / 3.0, epsilon = 1e-14);
        assert_eq!(g.exact_u_degree(), 13);
        assert_eq!(g.exact_trig_degree(), 6);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let c = Cubature::default();
        let e = c.integrate_1d(|x| x.sqrt(), 0.0, 1.0, &[]).unwrap();
        assert_abs_diff_eq!(e.value, 2.0 / 3.0, epsilon = 1e-13);
        let e = c.integrate_1d(|x| (x - 0.3).abs().powf(0.25), 0.0, 1.0, &[0.3]).unwrap();
        let exact = (0.3f64.powf(1.25) + 0.7f64.powf(1.25)) / 1.25;
        assert_abs_diff_eq!(e.value, exact, epsilon = 1e-13);
    }

    #[test]
    fn adaptive_sphere_matches_grid() {
        let f = |u: f64, p: f64| (1.0 + u).powi(3) * (1.0 + 0.5 * (2.0 * p).cos());
        let g = QuadratureGrid::new(4, 9).unwrap().integrate(f);
        let a = Cubature::default().integrate_sphere(f, &[]).unwrap();
        assert_abs_diff_eq!(g, 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(a.value, 2.0, epsilon = 1e-13);
    }
}
