//! JSON and CSV encodings of states, Hamiltonians, reports and traces.

use std::io::Write;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use wehrl_core::dynamics::{EntropyTimeSeries, SpinHamiltonian};
use wehrl_core::entropy::{MeasureReport, MeasureRow};
use wehrl_core::maps::MapTrace;
use wehrl_core::spin::{roots_from_state, state_from_roots};
use wehrl_core::{Complex64, PureState, StellarRoots, TwiceJ};

use crate::error::{CliError, CliResult};
use crate::meta::RunMeta;

/// Seventeen significant digits, enough to round-trip any f64.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_owned()
    } else if x > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub twice_j: u32,
    pub coeffs: Vec<[f64; 2]>,
}

impl StateRecord {
    pub fn from_state(state: &PureState) -> Self {
        Self { twice_j: state.twice_j().get(), coeffs: state.coeffs().iter().copied().map(pair).collect() }
    }

    pub fn to_state(&self) -> CliResult<PureState> {
        let coeffs = self.coeffs.iter().copied().map(complex).collect();
        Ok(PureState::from_coefficients(TwiceJ::new(self.twice_j), coeffs)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootsRecord {
    pub twice_j: u32,
    pub finite_roots: Vec<[f64; 2]>,
    pub roots_at_infinity: usize,
}

impl RootsRecord {
    pub fn from_state(state: &PureState) -> Self {
        let roots = roots_from_state(state);
        Self {
            twice_j: roots.twice_j.get(),
            finite_roots: roots.finite_roots.iter().copied().map(pair).collect(),
            roots_at_infinity: roots.roots_at_infinity,
        }
    }

    pub fn to_state(&self) -> CliResult<PureState> {
        let roots = StellarRoots::new(
            TwiceJ::new(self.twice_j),
            self.finite_roots.iter().copied().map(complex).collect(),
            self.roots_at_infinity,
        )?;
        Ok(state_from_roots(&roots)?)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum StateFile {
    Coefficients(StateRecord),
    Roots(RootsRecord),
}

/// Reads a state from either the coefficient or the root-list JSON form.
pub fn parse_state(text: &str) -> CliResult<PureState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("state file: {e}")))?;
    match file {
        StateFile::Coefficients(r) => r.to_state(),
        StateFile::Roots(r) => r.to_state(),
    }
    .map_err(|e| match e {
        CliError::Core(c) if !c.is_degenerate() => CliError::Input(c.to_string()),
        other => other,
    })
}

/// Dense hermitian matrix in the |m⟩ basis, ordered m = j, …, −j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianRecord {
    pub twice_j: u32,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl HamiltonianRecord {
    pub fn from_hamiltonian(h: &SpinHamiltonian) -> Self {
        let m = h.matrix();
        let matrix = (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| pair(m[(r, c)])).collect()).collect();
        Self { twice_j: h.twice_j().get(), matrix }
    }

    pub fn to_hamiltonian(&self) -> CliResult<SpinHamiltonian> {
        let n = self.twice_j as usize + 1;
        if self.matrix.len() != n || self.matrix.iter().any(|row| row.len() != n) {
            return Err(CliError::Input(format!("hamiltonian must be {n}x{n}")));
        }
        let m = DMatrix::from_fn(n, n, |r, c| complex(self.matrix[r][c]));
        SpinHamiltonian::new(TwiceJ::new(self.twice_j), m).map_err(|e| CliError::Input(e.to_string()))
    }
}

pub fn parse_hamiltonian(text: &str) -> CliResult<SpinHamiltonian> {
    let rec: HamiltonianRecord = serde_json::from_str(text).map_err(|e| CliError::Input(format!("hamiltonian file: {e}")))?;
    rec.to_hamiltonian()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowRecord {
    pub q: f64,
    #[serde(rename = "W")]
    pub w: Option<f64>,
    #[serde(rename = "S")]
    pub s: Option<f64>,
    #[serde(rename = "Y")]
    pub y: Option<f64>,
    #[serde(rename = "Z")]
    pub z: Option<f64>,
    pub method: String,
}

impl From<&MeasureRow> for RowRecord {
    fn from(r: &MeasureRow) -> Self {
        Self { q: r.q, w: r.w, s: r.s, y: r.y, z: r.z, method: r.method.as_str().to_owned() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRecord {
    pub state_id: String,
    pub twice_j: u32,
    pub rows: Vec<RowRecord>,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "T")]
    pub t: Option<f64>,
}

impl ReportRecord {
    pub fn new(state_id: &str, report: &MeasureReport) -> Self {
        Self {
            state_id: state_id.to_owned(),
            twice_j: report.twice_j.get(),
            rows: report.rows.iter().map(RowRecord::from).collect(),
            r: report.r,
            t: report.t,
        }
    }
}

/// Header lines carrying the run metadata that must not vary between identical runs.
fn csv_preamble(out: &mut Vec<u8>, meta: &RunMeta) {
    let seed = meta.seed.map(|s| s.to_string()).unwrap_or_else(|| "none".to_owned());
    // writes to a Vec cannot fail
    let _ = writeln!(out, "# tool={} version={}", meta.tool, meta.version);
    let _ = writeln!(out, "# config_hash={}", meta.config_hash);
    let _ = writeln!(out, "# seed={seed}");
}

fn csv_body(out: Vec<u8>, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

/// state_id, q, W, S, Y, Z, R, T, method.
pub fn reports_csv(meta: &RunMeta, reports: &[(String, MeasureReport)]) -> CliResult<Vec<u8>> {
    let mut out = Vec::new();
    csv_preamble(&mut out, meta);
    let rows = reports.iter().flat_map(|(id, rep)| {
        rep.rows.iter().map(move |r| {
            vec![id.clone(), num(r.q), opt(r.w), opt(r.s), opt(r.y), opt(r.z), num(rep.r), opt(rep.t), r.method.to_string()]
        })
    });
    csv_body(out, &["state_id", "q", "W", "S", "Y", "Z", "R", "T", "method"], rows)
}

pub fn reports_json(meta: &RunMeta, reports: &[(String, MeasureReport)]) -> CliResult<Vec<u8>> {
    let records: Vec<ReportRecord> = reports.iter().map(|(id, r)| ReportRecord::new(id, r)).collect();
    let doc = serde_json::json!({ "meta": meta, "reports": records });
    Ok(serde_json::to_vec_pretty(&doc)?)
}

/// One line of a Monte-Carlo comparison table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub q: f64,
    pub measure: String,
    pub n_samples: usize,
    pub mc_mean: f64,
    pub std_error: f64,
    pub exact_value: f64,
    pub z_score: f64,
    pub seed: u64,
}

pub fn mc_csv(meta: &RunMeta, rows: &[McRow]) -> CliResult<Vec<u8>> {
    let mut out = Vec::new();
    csv_preamble(&mut out, meta);
    let body = rows.iter().map(|r| {
        vec![
            r.n.to_string(),
            num(r.q),
            r.n_samples.to_string(),
            num(r.mc_mean),
            num(r.std_error),
            num(r.exact_value),
            num(r.z_score),
            r.seed.to_string(),
            r.measure.clone(),
        ]
    });
    csv_body(out, &["N", "q", "n_samples", "mc_mean", "std_error", "exact_value", "z_score", "seed", "measure"], body)
}

pub fn mc_json(meta: &RunMeta, rows: &[McRow]) -> CliResult<Vec<u8>> {
    Ok(serde_json::to_vec_pretty(&serde_json::json!({ "meta": meta, "rows": rows }))?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct SnapshotLine<'a> {
    map: &'a str,
    step: usize,
    coherent: bool,
    coherence_deficit: f64,
    state: StateRecord,
    report: ReportRecord,
}

/// JSON lines: a metadata line, then one line per snapshot, then a summary line.
pub fn trace_jsonl(meta: &RunMeta, trace: &MapTrace) -> CliResult<Vec<u8>> {
    let mut out = Vec::new();
    serde_json::to_writer(&mut out, &serde_json::json!({ "meta": meta }))?;
    out.push(b'\n');
    for (step, snap) in trace.snapshots.iter().enumerate() {
        let line = SnapshotLine {
            map: trace.map.as_str(),
            step,
            coherent: snap.state.is_coherent(),
            coherence_deficit: snap.state.coherence_deficit(),
            state: StateRecord::from_state(&snap.state),
            report: ReportRecord::new(&format!("step{step}"), &snap.report),
        };
        serde_json::to_writer(&mut out, &line)?;
        out.push(b'\n');
    }
    serde_json::to_writer(&mut out, &serde_json::json!({ "converged": trace.converged, "steps": trace.snapshots.len() }))?;
    out.push(b'\n');
    Ok(out)
}

/// t, q, S, W, dS_dt_analytic, dS_dt_fd.
pub fn series_csv(meta: &RunMeta, series: &[EntropyTimeSeries]) -> CliResult<Vec<u8>> {
    let mut out = Vec::new();
    csv_preamble(&mut out, meta);
    let rows = series.iter().flat_map(|s| {
        (0..s.times.len()).map(move |i| {
            vec![num(s.times[i]), num(s.q), num(s.s[i]), num(s.w[i]), num(s.ds_dt[i]), num(s.ds_dt_fd[i])]
        })
    });
    csv_body(out, &["t", "q", "S", "W", "dS_dt_analytic", "dS_dt_fd"], rows)
}

pub fn series_json(meta: &RunMeta, series: &[EntropyTimeSeries]) -> CliResult<Vec<u8>> {
    let items: Vec<serde_json::Value> = series
        .iter()
        .map(|s| {
            serde_json::json!({
                "q": s.q, "t": s.times, "S": s.s, "W": s.w,
                "dS_dt_analytic": s.ds_dt, "dS_dt_fd": s.ds_dt_fd,
            })
        })
        .collect();
    Ok(serde_json::to_vec_pretty(&serde_json::json!({ "meta": meta, "series": items }))?)
}
