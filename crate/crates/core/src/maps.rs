//! Entropy-reducing candidate maps on stellar roots and coefficients.

use core::f64::consts::PI;
use core::fmt;

use crate::entropy::{measure_report, moment_exact, MeasureReport};
use crate::error::{Error, Result};
use crate::optimize::{bisect, nelder_mead};
use crate::prelude::*;
use crate::spin::{roots_from_state, state_from_roots, PureState, Rotation, SpherePoint, StellarRoots};

/// Phase tolerance for the e^{iαk} pattern test.
const PATTERN_TOL: f64 = 1e-9;
/// Coefficients with amplitude below this are ignored by the pattern test.
const SIGNIFICANT: f64 = 1e-12;
/// Moment gap to the coherent value at which the driver stops.
pub const GAP_TOL: f64 = 1e-10;

/// Which map produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapKind {
    F1,
    F1Prime,
    F2,
    F3,
    Theorem2,
}

impl MapKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MapKind::F1 => "f1",
            MapKind::F1Prime => "f1prime",
            MapKind::F2 => "f2",
            MapKind::F3 => "f3",
            MapKind::Theorem2 => "theorem2",
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub state: PureState,
    pub report: MeasureReport,
}

/// States along a map iteration; `converged` means the last state is coherent.
#[derive(Debug, Clone, PartialEq)]
pub struct MapTrace {
    pub map: MapKind,
    pub snapshots: Vec<Snapshot>,
    pub converged: bool,
}

impl MapTrace {
    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("trace is never empty")
    }
}

fn snapshot(state: PureState, q: f64) -> Result<Snapshot> {
    let report = measure_report(&state, &[q])?;
    Ok(Snapshot { state, report })
}

/// Moves every finite root to |γ| on the φ = 0 meridian.
pub fn f1(state: &PureState) -> PureState {
    let roots = roots_from_state(state);
    let moved = StellarRoots { finite_roots: meridian(&roots.finite_roots), ..roots };
    state_from_roots(&moved).expect("root count preserved")
}

fn meridian(roots: &[Complex64]) -> Vec<Complex64> {
    roots.iter().map(|g| Complex64::new(g.norm(), 0.0)).collect()
}

/// F1 ∘ ℛ_x(π/2) ∘ F1, applied on the roots directly; the result is coherent.
pub fn f1_prime_collapse(state: &PureState) -> PureState {
    let roots = roots_from_state(state);
    let quarter = Rotation::about_x(PI / 2.0);
    let points: Vec<SpherePoint> = roots
        .points()
        .into_iter()
        .map(|p| match p {
            SpherePoint::Finite(g) => SpherePoint::Finite(Complex64::new(g.norm(), 0.0)),
            inf => inf,
        })
        .map(|p| quarter.apply_point(p))
        .map(|p| match p {
            SpherePoint::Finite(g) => SpherePoint::Finite(Complex64::new(g.norm(), 0.0)),
            inf => inf,
        })
        .collect();
    let moved = StellarRoots::from_points(roots.twice_j, &points).expect("root count preserved");
    state_from_roots(&moved).expect("root count preserved")
}

/// Replaces every coefficient by its modulus.
pub fn f2(state: &PureState) -> PureState {
    let coeffs = state.coeffs().iter().map(|f| Complex64::new(f.norm(), 0.0)).collect();
    PureState::from_coefficients(state.twice_j(), coeffs).expect("modulus keeps the norm")
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn perpendicular(n: [f64; 3]) -> [f64; 3] {
    let e = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = dot(e, n);
    let v = [e[0] - d * n[0], e[1] - d * n[1], e[2] - d * n[2]];
    let l = norm3(v);
    [v[0] / l, v[1] / l, v[2] / l]
}

/// Moves every root along its great circle toward the barycenter direction by
/// the fraction `step` of its angular distance.
pub fn f3(state: &PureState, step: f64) -> Result<PureState> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::param("f3 step must lie in (0, 1]"));
    }
    let roots = roots_from_state(state);
    let points = roots.points();
    if points.is_empty() {
        return Ok(state.clone());
    }
    let vs: Vec<[f64; 3]> = points.iter().map(|p| p.unit_vector()).collect();
    let mut bary = [0.0; 3];
    for v in &vs {
        for d in 0..3 {
            bary[d] += v[d];
        }
    }
    let len = norm3(bary);
    if len < 1e-12 * vs.len() as f64 {
        return Err(Error::DegenerateBarycenter);
    }
    let n = [bary[0] / len, bary[1] / len, bary[2] / len];
    let moved: Vec<SpherePoint> = vs
        .iter()
        .zip(&points)
        .map(|(&v, &p)| {
            let omega = dot(v, n).clamp(-1.0, 1.0).acos();
            if omega < 1e-15 {
                return p;
            }
            let w = if PI - omega < 1e-12 {
                let e = perpendicular(n);
                let (c, s) = ((step * PI).cos(), (step * PI).sin());
                [c * v[0] + s * e[0], c * v[1] + s * e[1], c * v[2] + s * e[2]]
            } else {
                let a = ((1.0 - step) * omega).sin() / omega.sin();
                let b = (step * omega).sin() / omega.sin();
                [a * v[0] + b * n[0], a * v[1] + b * n[1], a * v[2] + b * n[2]]
            };
            SpherePoint::from_unit_vector(w)
        })
        .collect();
    state_from_roots(&StellarRoots::from_points(roots.twice_j, &moved)?)
}

/// True when the coefficient phases follow f_k = e^{i(c + αk)}|f_k| for some c, α.
pub fn has_linear_phases(state: &PureState) -> bool {
    let binom = crate::spin::binomial_row(state.twice_j());
    let support: Vec<(usize, Complex64)> = state
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(k, f)| f.norm() / binom[*k].sqrt() > SIGNIFICANT)
        .map(|(k, f)| (k, f / f.norm()))
        .collect();
    if support.len() < 2 {
        return true;
    }
    let ratios: Vec<(f64, Complex64)> = support
        .windows(2)
        .map(|w| ((w[1].0 - w[0].0) as f64, w[1].1 * w[0].1.conj()))
        .collect();
    let (d0, r0) = ratios[0];
    (0..d0 as usize).any(|n| {
        let alpha = (r0.arg() + 2.0 * PI * n as f64) / d0;
        ratios.iter().all(|&(d, r)| (r - Complex64::from_polar(1.0, alpha * d)).norm() < PATTERN_TOL)
    })
}

/// Outcome of comparing W^(q) before and after F2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Report {
    pub q: u32,
    pub w_before: f64,
    pub w_after: f64,
    /// W^(q)(F2 ψ) ≥ W^(q)(ψ) − 1e-12.
    pub inequality_holds: bool,
    /// Coefficient phases fit the linear pattern e^{iαk}.
    pub equality_case_detected: bool,
    /// |W after − W before| ≤ 1e-12.
    pub moments_equal: bool,
}

pub fn lemma1_check(state: &PureState, q: u32) -> Result<Lemma1Report> {
    if q < 2 {
        return Err(Error::InvalidOrder(q as f64));
    }
    let w_before = moment_exact(state, q)?;
    let w_after = moment_exact(&f2(state), q)?;
    Ok(Lemma1Report {
        q,
        w_before,
        w_after,
        inequality_holds: w_after >= w_before - 1e-12,
        equality_case_detected: has_linear_phases(state),
        moments_equal: (w_after - w_before).abs() <= 1e-12,
    })
}

/// Maximum of f̃_0[x] = (1+x²)^{−j} Σ f_k x^k over rotations about the y axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    /// tan(θ/2); infinite when the maximum sits at the south pole.
    pub x_max: f64,
    pub theta_max: f64,
    pub f0_max: f64,
    /// d f̃_0/dx at the maximum.
    pub df0_dx: f64,
    /// First coefficient of the rotated state, equal to (1+x²) d f̃_0/dx.
    pub f1_rotated: f64,
    pub rotated: PureState,
}

fn f0_theta(f: &[f64], theta: f64) -> f64 {
    let n = f.len() as i32 - 1;
    let (s, c) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    f.iter().enumerate().map(|(k, fk)| fk * s.powi(k as i32) * c.powi(n - k as i32)).sum()
}

fn df0_theta(f: &[f64], theta: f64) -> f64 {
    let n = f.len() as i32 - 1;
    let (s, c) = ((theta / 2.0).sin(), (theta / 2.0).cos());
    f.iter()
        .enumerate()
        .map(|(k, fk)| {
            let k = k as i32;
            let up = if k > 0 { k as f64 * s.powi(k - 1) * c.powi(n - k + 1) } else { 0.0 };
            let down = if k < n { (n - k) as f64 * s.powi(k + 1) * c.powi(n - k - 1) } else { 0.0 };
            0.5 * fk * (up - down)
        })
        .sum()
}

/// Maximizes f̃_0 over θ = 2 atan x ∈ [0, π] and returns the rotated state.
pub fn rotation_scan_x(state: &PureState) -> Result<ScanResult> {
    if state.coeffs().iter().any(|f| f.im.abs() > 1e-12 || f.re < -1e-12) {
        return Err(Error::param("rotation scan needs real non-negative coefficients"));
    }
    let f: Vec<f64> = state.coeffs().iter().map(|c| c.re).collect();
    let m = (8 * f.len()).max(64);
    let grid = |i: usize| PI * i as f64 / m as f64;
    let best = (0..=m).max_by(|&a, &b| f0_theta(&f, grid(a)).total_cmp(&f0_theta(&f, grid(b)))).unwrap_or(0);
    let lo = grid(best.saturating_sub(1));
    let hi = grid((best + 1).min(m));
    let d = |t: f64| df0_theta(&f, t);
    let theta = if best == 0 && d(0.0) <= 0.0 {
        0.0
    } else if best == m && d(PI) >= 0.0 {
        PI
    } else if d(lo) > 0.0 && d(hi) < 0.0 {
        bisect(d, lo, hi)
    } else if d(lo) > 0.0 && d(grid(best)) <= 0.0 {
        bisect(d, lo, grid(best))
    } else if d(grid(best)) >= 0.0 && d(hi) < 0.0 {
        bisect(d, grid(best), hi)
    } else {
        grid(best)
    };
    let x_max = if theta >= PI { f64::INFINITY } else { (theta / 2.0).tan() };
    let rotated = Rotation::about_y(-theta).apply_state(state);
    let df0_dx = if x_max.is_finite() {
        let c = (theta / 2.0).cos();
        d(theta) * 2.0 * c * c
    } else {
        0.0
    };
    let f1_rotated = if rotated.dim() > 1 { rotated.coeffs()[1].re } else { 0.0 };
    Ok(ScanResult { x_max, theta_max: theta, f0_max: f0_theta(&f, theta), df0_dx, f1_rotated, rotated })
}

fn alternating(state: &PureState) -> bool {
    state.coeffs().iter().enumerate().all(|(k, f)| {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        (f - Complex64::new(sign * f.norm(), 0.0)).norm() < PATTERN_TOL
    })
}

fn xy_rotation(p: &[f64]) -> Rotation {
    Rotation::about_y(p[0]).compose(&Rotation::about_z(p[1]))
}

/// One step of the proof construction: F2, scan, rotate, F2.
fn proof_step(state: &PureState) -> Result<PureState> {
    let s = f2(state);
    let scan = rotation_scan_x(&s)?;
    let rotated = if alternating(&scan.rotated) {
        Rotation::about_y(-scan.theta_max * (1.0 - 1.0 / 1024.0)).apply_state(&s)
    } else {
        scan.rotated
    };
    Ok(f2(&rotated))
}

/// Best F2 ∘ ℛ over all rotations, from a grid seed refined by Nelder–Mead.
fn greedy_step(state: &PureState, q: u32) -> Result<PureState> {
    let objective = |p: &[f64]| -> f64 {
        let candidate = f2(&xy_rotation(p).apply_state(state));
        -moment_exact(&candidate, q).unwrap_or(0.0)
    };
    let mut seeds: Vec<(f64, [f64; 2])> = Vec::new();
    for i in 0..=8 {
        for k in 0..16 {
            let p = [PI * i as f64 / 8.0, 2.0 * PI * k as f64 / 16.0];
            seeds.push((objective(&p), p));
            if i == 0 || i == 8 {
                break;
            }
        }
    }
    seeds.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = (seeds[0].1.to_vec(), seeds[0].0);
    for (_, p) in seeds.iter().take(3) {
        let (x, v) = nelder_mead(objective, p, 0.2, 1e-15, 400);
        if v < best.1 {
            best = (x, v);
        }
    }
    Ok(f2(&xy_rotation(&best.0).apply_state(state)))
}

/// Iterates rotations and F2 until W^(q) reaches the coherent value.
///
/// Each step takes the better of the proof's x-rotation step and the best
/// rotation found by a search over the sphere. The trace is monotone in W^(q);
/// a step without progress ends the run with [`Error::Stalled`].
pub fn theorem2_driver(state: &PureState, q: u32, max_iters: usize) -> Result<MapTrace> {
    if q < 2 {
        return Err(Error::InvalidOrder(q as f64));
    }
    let n = state.dim() as f64;
    let target = n / (q as f64 * (n - 1.0) + 1.0);
    let qf = q as f64;
    let mut cur = state.clone();
    let mut w_cur = moment_exact(&cur, q)?;
    let mut snapshots = vec![snapshot(cur.clone(), qf)?];
    let done = |s: &PureState, w: f64| s.is_coherent() || target - w <= GAP_TOL;
    let mut converged = done(&cur, w_cur);
    let mut step = 0;
    while !converged && step < max_iters {
        step += 1;
        let mut next = greedy_step(&cur, q)?;
        let mut w_next = moment_exact(&next, q)?;
        let alt = proof_step(&cur)?;
        let w_alt = moment_exact(&alt, q)?;
        if w_alt > w_next {
            next = alt;
            w_next = w_alt;
        }
        if w_next < w_cur - 1e-14 {
            return Err(Error::NotMonotone { step, before: w_cur, after: w_next });
        }
        if w_next <= w_cur {
            return Err(Error::Stalled { step, moment: w_cur, target });
        }
        cur = next;
        w_cur = w_next;
        snapshots.push(snapshot(cur.clone(), qf)?);
        converged = done(&cur, w_cur);
    }
    Ok(MapTrace { map: MapKind::Theorem2, snapshots, converged })
}

/// Applies one of the single-shot maps and records input and output.
pub fn apply_map(kind: MapKind, state: &PureState, q: f64, step: f64, max_iters: usize) -> Result<MapTrace> {
    let out = match kind {
        MapKind::F1 => f1(state),
        MapKind::F1Prime => f1_prime_collapse(state),
        MapKind::F2 => f2(state),
        MapKind::F3 => f3(state, step)?,
        MapKind::Theorem2 => {
            let k = crate::entropy::integer_order(q).ok_or(Error::InvalidOrder(q))?;
            return theorem2_driver(state, k, max_iters);
        }
    };
    let converged = out.is_coherent();
    Ok(MapTrace { map: kind, snapshots: vec![snapshot(state.clone(), q)?, snapshot(out, q)?], converged })
}
