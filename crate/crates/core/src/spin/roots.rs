use crate::prelude::*;

use nalgebra::DMatrix;

use super::{PureState, SpherePoint, TwiceJ};
use crate::error::{Error, Result};
use crate::poly;

/// Roots farther out than this are reported at infinity.
pub const INFINITY_RADIUS: f64 = 1e8;

/// Amplitude threshold below which a coefficient counts as zero.
pub(crate) const ZERO_AMPLITUDE: f64 = 1e-14;

/// Candidate cluster members lie within this fraction of (1 + |z|) of each other.
const CLUSTER_RADIUS: f64 = 0.5;

/// Stellar representation: ψ(γ) = 𝒩⁻¹ Π (γ − γ_k) over the finite roots.
#[derive(Debug, Clone, PartialEq)]
pub struct StellarRoots {
    pub twice_j: TwiceJ,
    pub finite_roots: Vec<Complex64>,
    pub roots_at_infinity: usize,
    /// 𝒩⁻¹, the leading coefficient of the Bargmann polynomial.
    pub scale: Complex64,
}

impl StellarRoots {
    pub fn new(twice_j: TwiceJ, finite_roots: Vec<Complex64>, roots_at_infinity: usize) -> Result<Self> {
        let found = finite_roots.len() + roots_at_infinity;
        if found != twice_j.get() as usize {
            return Err(Error::RootCountMismatch { expected: twice_j.get() as usize, found });
        }
        Ok(Self { twice_j, finite_roots, roots_at_infinity, scale: Complex64::new(1.0, 0.0) })
    }

    /// All 2j roots as sphere points, finite ones first.
    pub fn points(&self) -> Vec<SpherePoint> {
        let mut v: Vec<SpherePoint> = self.finite_roots.iter().map(|&g| SpherePoint::Finite(g)).collect();
        v.extend(core::iter::repeat_n(SpherePoint::Infinity, self.roots_at_infinity));
        v
    }

    pub fn from_points(twice_j: TwiceJ, points: &[SpherePoint]) -> Result<Self> {
        let finite: Vec<Complex64> = points.iter().filter_map(|p| p.gamma()).collect();
        let inf = points.len() - finite.len();
        Self::new(twice_j, finite, inf)
    }

    /// Largest pairwise chordal distance between the roots.
    pub fn spread(&self) -> f64 {
        let pts = self.points();
        let mut d: f64 = 0.0;
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                d = d.max(a.chordal_distance(b));
            }
        }
        d
    }
}

/// Roots of the Bargmann polynomial; roots at infinity account for the degree drop.
pub fn roots_from_state(state: &PureState) -> StellarRoots {
    let twice_j = state.twice_j();
    let f = state.coeffs();
    let binom = super::binomial_row(twice_j);
    let significant = |k: &usize| f[*k].norm() / binom[*k].sqrt() > ZERO_AMPLITUDE;
    let n = f.len();
    let hi = (0..n).rev().find(significant).unwrap_or(0);
    let lo = (0..n).find(significant).unwrap_or(0);
    let mut finite = vec![Complex64::zero(); lo];
    let mut at_infinity = n - 1 - hi;
    for r in polynomial_roots(&f[lo..=hi]) {
        if r.norm() > INFINITY_RADIUS || !r.is_finite() {
            at_infinity += 1;
        } else {
            finite.push(r);
        }
    }
    StellarRoots { twice_j, finite_roots: finite, roots_at_infinity: at_infinity, scale: f[hi] }
}

/// Expands Π (γ − γ_k) and normalizes.
pub fn state_from_roots(roots: &StellarRoots) -> Result<PureState> {
    let n = roots.twice_j.get() as usize;
    let found = roots.finite_roots.len() + roots.roots_at_infinity;
    if found != n {
        return Err(Error::RootCountMismatch { expected: n, found });
    }
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for &r in &roots.finite_roots {
        p = poly::mul(&p, &[-r, Complex64::new(1.0, 0.0)]);
    }
    p.resize(n + 1, Complex64::zero());
    PureState::from_coefficients(roots.twice_j, p)
}

/// All roots of a polynomial with nonzero constant and leading coefficients.
///
/// Companion-matrix eigenvalues, Newton polishing, then merging of clusters
/// that are numerically indistinguishable from a multiple root.
pub(crate) fn polynomial_roots(p: &[Complex64]) -> Vec<Complex64> {
    let d = p.len().saturating_sub(1);
    match d {
        0 => return Vec::new(),
        1 => return vec![-p[0] / p[1]],
        _ => {}
    }
    // Rescale z = σ w so that the constant and leading coefficients match in size.
    let sigma = if p[0].is_zero() { 1.0 } else { (p[0].norm() / p[d].norm()).powf(1.0 / d as f64) };
    let q: Vec<Complex64> = p.iter().enumerate().map(|(k, c)| c * sigma.powi(k as i32)).collect();
    let mut raw = companion_eigenvalues(&q);
    for z in raw.iter_mut() {
        *z = newton_polish(&q, *z);
    }
    let merged = merge_clusters(&q, &raw);
    merged.into_iter().map(|z| z * sigma).collect()
}

fn companion_eigenvalues(q: &[Complex64]) -> Vec<Complex64> {
    let d = q.len() - 1;
    let lead = q[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for k in 0..d {
        m[(0, k)] = -q[d - 1 - k] / lead;
    }
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    let Some(schur) = nalgebra::Schur::try_new(m, f64::EPSILON, SCHUR_MAX_ITERS) else {
        return aberth(q);
    };
    let (_, t) = schur.unpack();
    let mut out = Vec::with_capacity(d);
    let mut i = 0;
    while i < d {
        if i + 1 < d && !t[(i + 1, i)].is_zero() {
            let (a, b, c, e) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let half = (a - e) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let mid = (a + e) * 0.5;
            out.push(mid + disc);
            out.push(mid - disc);
            i += 2;
        } else {
            out.push(t[(i, i)]);
            i += 1;
        }
    }
    out
}

const SCHUR_MAX_ITERS: usize = 10_000;

/// Aberth–Ehrlich simultaneous iteration, used when the Schur step stalls.
fn aberth(q: &[Complex64]) -> Vec<Complex64> {
    let d = q.len() - 1;
    let lead = q[d].norm();
    let radius = (0..d)
        .map(|k| (q[k].norm() / lead).powf(1.0 / (d - k) as f64))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, core::f64::consts::TAU * (k as f64 + 0.25) / d as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (v, dv) = poly::horner_with_derivative(q, z[i]);
            if v.is_zero() {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..d).filter(|&k| k != i).map(|k| (z[i] - z[k]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 4.0 * f64::EPSILON {
            break;
        }
    }
    z
}

fn newton_polish(q: &[Complex64], z0: Complex64) -> Complex64 {
    let mut z = z0;
    let mut pz = poly::horner(q, z).norm();
    for _ in 0..4 {
        let (v, dv) = poly::horner_with_derivative(q, z);
        if dv.is_zero() || v.is_zero() {
            break;
        }
        let cand = z - v / dv;
        let pc = poly::horner(q, cand).norm();
        if pc < pz {
            z = cand;
            pz = pc;
        } else {
            break;
        }
    }
    z
}

/// Whether q has an m-fold root at c up to rounding: the Taylor coefficients
/// below order m must be no larger than their own evaluation error.
fn is_multiple_root(q: &[Complex64], c: Complex64, m: usize) -> bool {
    let (poly_c, point): (Vec<Complex64>, Complex64) = if c.norm() <= 1.0 {
        (q.to_vec(), c)
    } else {
        (q.iter().rev().copied().collect(), c.inv())
    };
    let t = poly::taylor_shift(&poly_c, point);
    let bound = poly::taylor_shift_abs(&poly_c, point.norm());
    let slack = 64.0 * q.len() as f64 * f64::EPSILON;
    (0..m).all(|i| t[i].norm() <= slack * bound[i])
}

/// Newton on the (m−1)-th derivative, whose root at an m-fold root is simple.
fn refine_multiple(q: &[Complex64], c: Complex64, m: usize) -> Complex64 {
    let dq = poly::scaled_derivative(q, m - 1);
    newton_polish(&dq, c)
}

fn merge_clusters(q: &[Complex64], roots: &[Complex64]) -> Vec<Complex64> {
    let d = roots.len();
    let mut used = vec![false; d];
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        if used[i] {
            continue;
        }
        let zi = roots[i];
        let mut cand: Vec<(f64, usize)> = (0..d)
            .filter(|&k| !used[k])
            .map(|k| ((roots[k] - zi).norm(), k))
            .filter(|&(dist, _)| dist <= CLUSTER_RADIUS * (1.0 + zi.norm()))
            .collect();
        cand.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut best: Option<(usize, Complex64)> = None;
        for m in 2..=cand.len() {
            let centroid = cand[..m].iter().map(|&(_, k)| roots[k]).sum::<Complex64>() / m as f64;
            let c = refine_multiple(q, centroid, m);
            if is_multiple_root(q, c, m) {
                best = Some((m, c));
            }
        }
        match best {
            Some((m, c)) => {
                for &(_, k) in &cand[..m] {
                    used[k] = true;
                }
                out.extend(core::iter::repeat_n(c, m));
            }
            None => {
                used[i] = true;
                out.push(zi);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{basis_state, coherent_state};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn aberth_finds_simple_roots() {
        let want = [c(1.0, 0.0), c(-0.5, 2.0), c(0.0, -3.0), c(2.5, 0.5)];
        let mut p = vec![c(1.0, 0.0)];
        for &r in &want {
            p = poly::mul(&p, &[-r, c(1.0, 0.0)]);
        }
        let got = sorted(aberth(&p));
        for (g, w) in got.iter().zip(sorted(want.to_vec())) {
            assert!((g - w).norm() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn simple_quadratic() {
        let s = PureState::from_coefficients(TwiceJ::new(2), vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let r = roots_from_state(&s);
        assert_eq!(r.roots_at_infinity, 0);
        let v = sorted(r.finite_roots.clone());
        assert!((v[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((v[1] - c(1.0, 0.0)).norm() < 1e-14);
        assert!(state_from_roots(&r).unwrap().phase_distance(&s) < 1e-14);
    }

    #[test]
    fn coherent_state_has_one_multiple_root() {
        for tj in [1u32, 2, 5, 12, 20] {
            let g = c(0.3, -0.8);
            let s = coherent_state(g.into(), TwiceJ::new(tj));
            let r = roots_from_state(&s);
            assert_eq!(r.finite_roots.len(), tj as usize);
            let expect = -g.conj().inv();
            for z in &r.finite_roots {
                assert!((z - expect).norm() < 1e-12, "2j={tj}: {z} vs {expect}");
            }
            assert!(r.spread() < 1e-12);
        }
        let r = roots_from_state(&coherent_state(SpherePoint::NORTH, TwiceJ::new(4)));
        assert_eq!(r.roots_at_infinity, 4);
    }

    #[test]
    fn basis_state_roots() {
        let r = roots_from_state(&basis_state(1, TwiceJ::new(5)).unwrap());
        assert_eq!(r.finite_roots, vec![c(0.0, 0.0); 2]);
        assert_eq!(r.roots_at_infinity, 3);
    }

    #[test]
    fn close_distinct_roots_are_not_merged() {
        let roots = StellarRoots::new(TwiceJ::new(3), vec![c(0.5, 0.0), c(0.5 + 1e-4, 0.0), c(-2.0, 1.0)], 0).unwrap();
        let s = state_from_roots(&roots).unwrap();
        let back = sorted(roots_from_state(&s).finite_roots);
        assert!((back[1] - c(0.5, 0.0)).norm() < 1e-9);
        assert!((back[2] - c(0.5 + 1e-4, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn all_roots_at_infinity() {
        let r = StellarRoots::new(TwiceJ::new(3), vec![], 3).unwrap();
        assert_eq!(state_from_roots(&r).unwrap(), coherent_state(SpherePoint::NORTH, TwiceJ::new(3)));
        assert!(StellarRoots::new(TwiceJ::new(3), vec![], 2).is_err());
    }
}
