//! Command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wehrl_core::dynamics::{entropy_time_series, SpinHamiltonian};
use wehrl_core::ensemble::{haar_random_state, sample_rng, Measure};
use wehrl_core::entropy::{coherent_closed_forms, jz_closed_forms, measure_report_with, MeasureReport};
use wehrl_core::maps::{apply_map, MapKind};
use wehrl_core::quadrature::Cubature;
use wehrl_core::spin::{basis_state, coherent_state};
use wehrl_core::{Complex64, PureState, SpherePoint, TwiceJ};

use crate::error::{CliError, CliResult};
use crate::fixtures::Polyhedron;
use crate::formats;
use crate::meta::{sidecar_path, RunMeta};
use crate::parallel::par_mc_mean_measure;
use crate::verify;

#[derive(Debug, Parser, Serialize)]
#[command(name = "wehrl", version, about = "Rényi-Wehrl entropies and phase-space localization of spin states")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalArgs {
    /// RNG seed for random states, Hamiltonians and Monte-Carlo runs.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_SEED)]
    pub seed: u64,
    /// Relative tolerance of the adaptive cubature.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// Output format; defaults to json for measure and verify, csv for random and dynamics.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Localization measures of one state.
    Measure {
        #[command(flatten)]
        state: StateArgs,
        /// Rényi indices.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        q: Vec<f64>,
    },
    /// Monte-Carlo averages over Haar-random states against the exact means.
    Random {
        /// Hilbert-space dimensions N = 2j + 1.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        q: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Averaged quantity; auto takes the entropy at q = 1 and the moment otherwise.
        #[arg(long, value_enum, default_value_t = MeasureArg::Auto)]
        measure: MeasureArg,
    },
    /// Applies a map and writes the trace as JSON lines.
    Maps {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum)]
        map: MapArg,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
        /// Fraction of the way each root moves toward the barycenter (f3).
        #[arg(long, default_value_t = 1.0)]
        step: f64,
    },
    /// Entropy time series under a Hamiltonian.
    Dynamics {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        hamiltonian: HamiltonianArgs,
        #[arg(long, default_value_t = 1.0)]
        t_max: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        q: Vec<f64>,
    },
    /// Runs the acceptance suite.
    Verify {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureArg {
    Auto,
    Moment,
    Entropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapArg {
    F1,
    F1prime,
    F2,
    F3,
    Theorem2,
}

impl From<MapArg> for MapKind {
    fn from(m: MapArg) -> Self {
        match m {
            MapArg::F1 => MapKind::F1,
            MapArg::F1prime => MapKind::F1Prime,
            MapArg::F2 => MapKind::F2,
            MapArg::F3 => MapKind::F3,
            MapArg::Theorem2 => MapKind::Theorem2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Builtin {
    Coherent,
    Jz,
    Platonic,
    Random,
}

/// Where the input state comes from: a JSON file or a builtin family.
#[derive(Debug, Args, Serialize)]
pub struct StateArgs {
    /// State file: {"twice_j", "coeffs"} or {"twice_j", "finite_roots", "roots_at_infinity"}.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pub state: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    /// 2j for builtin states.
    #[arg(long)]
    pub twice_j: Option<u32>,
    /// Coherent-state centre as "re,im", or "inf" for the south pole.
    #[arg(long, default_value = "0,0")]
    pub gamma: String,
    /// Magnetic quantum number of a J_z eigenstate, integer or half-integer.
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianBuiltin {
    Jz,
    Jx,
    Rotation,
    Random,
}

#[derive(Debug, Args, Serialize)]
pub struct HamiltonianArgs {
    /// Hamiltonian file: {"twice_j", "matrix"} with [re, im] entries.
    #[arg(long, conflicts_with = "h_builtin", required_unless_present = "h_builtin")]
    pub hamiltonian: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub h_builtin: Option<HamiltonianBuiltin>,
    /// J_z weight a of the rotation generator a·J_z + (b·J₋ + b̄·J₊)/2.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub rot_a: f64,
    /// Complex weight b of the rotation generator as "re,im".
    #[arg(long, default_value = "0,0", allow_negative_numbers = true)]
    pub rot_b: String,
}

/// Parses the arguments and runs the command.
pub fn run<I, T>(args: I) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.render().to_string().trim_end().to_owned())),
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    let start = Instant::now();
    let g = &cli.global;
    if !(g.tol.is_finite() && g.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", g.tol)));
    }
    let meta = |seed: Option<u64>| RunMeta::new(cli, seed, start.elapsed().as_secs_f64());
    match &cli.command {
        Command::Measure { state, q } => {
            check_orders(q)?;
            let (id, psi) = load_state(state, g.seed)?;
            let cub = Cubature { rel_tol: g.tol, abs_tol: g.tol * 1e-3, ..Cubature::default() };
            let mut reports = vec![(id.clone(), measure_report_with(&psi, q, &cub)?)];
            if let Some(closed) = closed_forms(state, &psi, q)? {
                reports.push((id, closed));
            }
            let seed = uses_seed(state).then_some(g.seed);
            match g.format.unwrap_or(Format::Json) {
                Format::Json => emit(g, &formats::reports_json(&meta(seed), &reports)?, None),
                Format::Csv => {
                    let m = meta(seed);
                    emit(g, &formats::reports_csv(&m, &reports)?, Some(&m))
                }
            }
        }
        Command::Random { n, q, samples, measure } => {
            check_orders(q)?;
            let mut rows = Vec::new();
            for &nn in n {
                if nn == 0 {
                    return Err(CliError::Usage("N must be at least 1".into()));
                }
                let twice_j = u32::try_from(nn - 1).map_err(|_| CliError::Usage(format!("N = {nn} is too large")))?;
                for &qq in q {
                    let kind = match measure {
                        MeasureArg::Moment => Measure::Moment,
                        MeasureArg::Entropy => Measure::Entropy,
                        MeasureArg::Auto if qq == 1.0 => Measure::Entropy,
                        MeasureArg::Auto => Measure::Moment,
                    };
                    let est = par_mc_mean_measure(TwiceJ::new(twice_j), qq, kind, *samples, g.seed)?;
                    let exact = kind.expected(nn, qq)?;
                    rows.push(formats::McRow {
                        n: nn,
                        q: qq,
                        measure: kind.as_str().to_owned(),
                        n_samples: est.n_samples,
                        mc_mean: est.mean,
                        std_error: est.std_error,
                        exact_value: exact,
                        z_score: est.z_score(exact),
                        seed: g.seed,
                    });
                }
            }
            match g.format.unwrap_or(Format::Csv) {
                Format::Json => emit(g, &formats::mc_json(&meta(Some(g.seed)), &rows)?, None),
                Format::Csv => {
                    let m = meta(Some(g.seed));
                    emit(g, &formats::mc_csv(&m, &rows)?, Some(&m))
                }
            }
        }
        Command::Maps { state, map, q, max_iters, step } => {
            if g.format == Some(Format::Csv) {
                return Err(CliError::Usage("map traces are written as JSON lines only".into()));
            }
            check_orders(&[*q])?;
            let (_, psi) = load_state(state, g.seed)?;
            let trace = apply_map((*map).into(), &psi, *q, *step, *max_iters)?;
            let seed = uses_seed(state).then_some(g.seed);
            emit(g, &formats::trace_jsonl(&meta(seed), &trace)?, None)
        }
        Command::Dynamics { state, hamiltonian, t_max, steps, q } => {
            check_orders(q)?;
            if !(t_max.is_finite() && *t_max > 0.0) || *steps == 0 {
                return Err(CliError::Usage("--t-max must be positive and --steps at least 1".into()));
            }
            let (_, psi) = load_state(state, g.seed)?;
            let h = load_hamiltonian(hamiltonian, psi.twice_j(), g.seed)?;
            if h.twice_j() != psi.twice_j() {
                return Err(CliError::Input(format!("hamiltonian has 2j = {}, state has 2j = {}", h.twice_j(), psi.twice_j())));
            }
            let series = q.iter().map(|&qq| entropy_time_series(&psi, &h, qq, *t_max, *steps)).collect::<Result<Vec<_>, _>>()?;
            let seed = (uses_seed(state) || hamiltonian.h_builtin == Some(HamiltonianBuiltin::Random)).then_some(g.seed);
            match g.format.unwrap_or(Format::Csv) {
                Format::Json => emit(g, &formats::series_json(&meta(seed), &series)?, None),
                Format::Csv => {
                    let m = meta(seed);
                    emit(g, &formats::series_csv(&m, &series)?, Some(&m))
                }
            }
        }
        Command::Verify { only } => {
            if let Some(bad) = only.iter().find(|&&id| !(1..=12).contains(&id)) {
                return Err(CliError::Usage(format!("no criterion {bad}; ids run from 1 to 12")));
            }
            let results = verify::run(only, g.seed);
            let bytes = match g.format.unwrap_or(Format::Json) {
                Format::Json => serde_json::to_vec_pretty(&serde_json::json!({ "meta": meta(Some(g.seed)), "criteria": results }))?,
                Format::Csv => return Err(CliError::Usage("verify writes JSON only".into())),
            };
            for r in &results {
                eprintln!("{}", r.line());
            }
            emit(g, &bytes, None)?;
            let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| r.id.to_string()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Assertion(format!("criteria failed: {}", failed.join(", "))))
            }
        }
    }
}

fn check_orders(qs: &[f64]) -> CliResult<()> {
    match qs.iter().find(|q| !(q.is_finite() && **q > 0.0)) {
        Some(q) => Err(CliError::Usage(format!("Rényi index must be positive and finite, got {q}"))),
        None if qs.is_empty() => Err(CliError::Usage("need at least one Rényi index".into())),
        None => Ok(()),
    }
}

fn uses_seed(state: &StateArgs) -> bool {
    state.builtin == Some(Builtin::Random)
}

fn parse_complex(text: &str) -> CliResult<Complex64> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || CliError::Usage(format!("expected a complex number as \"re,im\", got {text:?}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(re.parse().map_err(|_| bad())?, 0.0)),
        [re, im] => Ok(Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn twice_j_arg(args: &StateArgs) -> CliResult<TwiceJ> {
    args.twice_j.map(TwiceJ::new).ok_or_else(|| CliError::Usage("this builtin needs --twice-j".into()))
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// The state and a short identifier for reports.
pub fn load_state(args: &StateArgs, seed: u64) -> CliResult<(String, PureState)> {
    if let Some(path) = &args.state {
        return Ok((path.display().to_string(), formats::parse_state(&read(path)?)?));
    }
    match args.builtin {
        Some(Builtin::Coherent) => {
            let twice_j = twice_j_arg(args)?;
            let point = if args.gamma.trim().eq_ignore_ascii_case("inf") {
                SpherePoint::Infinity
            } else {
                let g = parse_complex(&args.gamma)?;
                if !(g.re.is_finite() && g.im.is_finite()) {
                    return Err(CliError::Usage("--gamma must be finite or \"inf\"".into()));
                }
                SpherePoint::finite(g)
            };
            Ok((format!("coherent({})", args.gamma), coherent_state(point, twice_j)))
        }
        Some(Builtin::Jz) => {
            let twice_j = twice_j_arg(args)?;
            let twice_m = twice_m(args)?;
            let state = basis_state(twice_m, twice_j).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok((format!("jz(2m={twice_m})"), state))
        }
        Some(Builtin::Platonic) => {
            let p = Polyhedron::from_twice_j(twice_j_arg(args)?.get()).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok((p.name().to_owned(), p.state()?))
        }
        Some(Builtin::Random) => {
            let twice_j = twice_j_arg(args)?;
            Ok((format!("random(seed={seed})"), haar_random_state(twice_j, &mut sample_rng(seed, 0))))
        }
        None => Err(CliError::Usage("give --state or --builtin".into())),
    }
}

fn twice_m(args: &StateArgs) -> CliResult<i64> {
    let m = args.m.ok_or_else(|| CliError::Usage("the jz builtin needs --m".into()))?;
    let twice = 2.0 * m;
    if !twice.is_finite() || twice.fract() != 0.0 {
        return Err(CliError::Usage(format!("--m must be an integer or half-integer, got {m}")));
    }
    Ok(twice as i64)
}

/// Closed-form rows for builtin J_z eigenstates and for coherent states.
fn closed_forms(args: &StateArgs, state: &PureState, qs: &[f64]) -> CliResult<Option<MeasureReport>> {
    let twice_j = state.twice_j();
    let per_q: Vec<MeasureReport> = if args.builtin == Some(Builtin::Jz) {
        let m = twice_m(args)?;
        qs.iter().map(|&q| jz_closed_forms(twice_j, m, q)).collect::<Result<_, _>>()?
    } else if state.is_coherent() {
        qs.iter().map(|&q| coherent_closed_forms(twice_j, q)).collect::<Result<_, _>>()?
    } else {
        return Ok(None);
    };
    let mut it = per_q.into_iter();
    let Some(mut first) = it.next() else { return Ok(None) };
    for r in it {
        first.rows.extend(r.rows);
    }
    Ok(Some(first))
}

fn load_hamiltonian(args: &HamiltonianArgs, twice_j: TwiceJ, seed: u64) -> CliResult<SpinHamiltonian> {
    if let Some(path) = &args.hamiltonian {
        return formats::parse_hamiltonian(&read(path)?);
    }
    Ok(match args.h_builtin {
        Some(HamiltonianBuiltin::Jz) => SpinHamiltonian::jz(twice_j),
        Some(HamiltonianBuiltin::Jx) => SpinHamiltonian::jx(twice_j),
        Some(HamiltonianBuiltin::Rotation) => SpinHamiltonian::rotation(twice_j, args.rot_a, parse_complex(&args.rot_b)?),
        Some(HamiltonianBuiltin::Random) => SpinHamiltonian::random_gue(twice_j, &mut sample_rng(seed, 1)),
        None => return Err(CliError::Usage("give --hamiltonian or --h-builtin".into())),
    })
}

/// Writes the artifact. CSV runtimes go to a sidecar file, or to standard error.
fn emit(g: &GlobalArgs, bytes: &[u8], csv_meta: Option<&RunMeta>) -> CliResult<()> {
    match &g.out {
        Some(path) => {
            std::fs::write(path, bytes)?;
            if let Some(m) = csv_meta {
                std::fs::write(sidecar_path(path), serde_json::to_vec_pretty(m)?)?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            if let Some(m) = csv_meta {
                eprintln!("# runtime_seconds={}", formats::num(m.runtime_seconds));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_complex_arguments() {
        assert_eq!(parse_complex("0.5,-1").unwrap(), Complex64::new(0.5, -1.0));
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert!(parse_complex("a,b").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let e = run(["wehrl", "measure"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run(["wehrl", "measure", "--builtin", "coherent", "--twice-j", "2", "--q", "-1"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(run(["wehrl", "--help"]).is_ok());
    }

    #[test]
    fn config_hash_ignores_output_path() {
        let a = Cli::try_parse_from(["wehrl", "random", "--n", "3", "--out", "a.csv"]).unwrap();
        let b = Cli::try_parse_from(["wehrl", "random", "--n", "3", "--out", "b.csv"]).unwrap();
        let c = Cli::try_parse_from(["wehrl", "random", "--n", "5"]).unwrap();
        assert_eq!(crate::meta::config_hash(&a), crate::meta::config_hash(&b));
        assert_ne!(crate::meta::config_hash(&a), crate::meta::config_hash(&c));
    }
}
