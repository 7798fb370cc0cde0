//! Scenario execution: evolution, measures, fits and file output.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use decoh_core::fit::{fit_decay, DecayLaw, FIT_WINDOW};
use decoh_core::lindblad::{evolve, IntegratorConfig};
use decoh_core::linalg::pauli;
use decoh_core::measures::{purity, quantum_mutual_information, von_neumann_entropy};
use decoh_core::models::{spin_boson_pure_dephasing, spin_spin_coherence_factor};
use decoh_core::trajectories::{ensemble_statistics, StochasticScheme, TrajectoryConfig};
use decoh_core::wigner::{check_marginals, wigner};
use decoh_core::{DensityMatrix, Operator, C64};

use crate::config::{FitLaw, InitialState, MatrixSpec, ModelKind, ScenarioConfig, SchemeKind};
use crate::error::RunError;
use crate::output::{fmt_f64, write_json, CsvTable};
use crate::parallel::unravel_parallel;
use crate::scenario::{build, operator_from_spec, Dynamics, Scenario};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Replaces the config seed.
    pub seed: Option<u64>,
    /// Trajectory worker threads; the global pool when `None`.
    pub threads: Option<usize>,
}

/// Recorded states of the scenario's evolution.
#[derive(Clone, Debug)]
pub struct Evolution {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// States on which the mutual information is evaluated.
    pub joint: Option<Vec<DensityMatrix>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StateSummary {
    pub trace: f64,
    pub purity: f64,
    pub entropy: f64,
}

impl StateSummary {
    fn of(rho: &DensityMatrix) -> Self {
        StateSummary { trace: rho.trace().re, purity: purity(rho), entropy: von_neumann_entropy(rho) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FitSummary {
    pub law: FitLaw,
    pub rate: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub residual: f64,
    pub points: usize,
    pub window: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_error: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WignerSummary {
    pub requested_time: f64,
    pub time: f64,
    pub normalization: f64,
    pub marginal_mismatch: f64,
    /// `max_p |W(0, p)|` for a two-packet cat.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ridge_amplitude: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObservableSummary {
    pub label: String,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub deterministic: Vec<f64>,
    /// `max_t |mean − deterministic| / stderr` over times with nonzero
    /// spread.
    pub max_deviation_in_stderr: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrajectorySummary {
    pub n_trajectories: usize,
    pub scheme: SchemeKind,
    pub dt: f64,
    pub max_trace_drift: f64,
    pub times: Vec<f64>,
    pub observables: Vec<ObservableSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub scenario: String,
    pub model: ModelKind,
    pub seed: u64,
    pub records: usize,
    pub t_final: f64,
    pub initial: StateSummary,
    #[serde(rename = "final")]
    pub final_state: StateSummary,
    pub analytic: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub wigner: Vec<WignerSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectories: Option<TrajectorySummary>,
    /// Output file names, relative to the output directory.
    pub files: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub summary: Summary,
    pub summary_path: PathBuf,
    pub files: Vec<PathBuf>,
}

fn run<T>(r: decoh_core::Result<T>) -> Result<T, RunError> {
    r.map_err(RunError::from_run)
}

/// Reads and validates a config file; the second value is the file stem
/// used as the default scenario name.
pub fn load_config(path: &Path) -> Result<(ScenarioConfig, String), RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    let cfg = ScenarioConfig::parse(&text)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario").to_string();
    Ok((cfg, stem))
}

/// Loads, builds and checks a config without evolving it.
pub fn validate_file(path: &Path) -> Result<Scenario, RunError> {
    let (cfg, stem) = load_config(path)?;
    build(&cfg, &stem)
}

pub fn run_file(path: &Path, opts: &RunOptions) -> Result<RunReport, RunError> {
    let (cfg, stem) = load_config(path)?;
    run_scenario(&cfg, &stem, opts)
}

/// Record times of the deterministic integrator: every `record_stride`-th
/// step plus the final one.
pub fn record_times(dt: f64, t_final: f64, stride: usize) -> Vec<f64> {
    let cfg = IntegratorConfig { dt, t_final, record_stride: stride, check_positivity: false };
    let (steps, h) = (cfg.n_steps(), cfg.effective_dt());
    let mut t = vec![0.0];
    t.extend((1..=steps).filter(|k| k % stride == 0 || *k == steps).map(|k| k as f64 * h));
    t
}

/// Evolves the scenario's initial state over the integrator's record times.
pub fn evolve_scenario(sc: &Scenario) -> Result<Evolution, RunError> {
    let ig = sc.config.integrator;
    let wants_mi = sc.config.wants("mutual_information");
    match &sc.dynamics {
        Dynamics::Generator(gen) => {
            let cfg = IntegratorConfig {
                dt: ig.dt,
                t_final: ig.t_final,
                record_stride: ig.record_stride,
                check_positivity: ig.check_positivity,
            };
            let ts = run(evolve(gen, &sc.rho0, &cfg))?;
            let joint = wants_mi.then(|| ts.states.clone());
            Ok(Evolution { times: ts.times, states: ts.states, joint })
        }
        Dynamics::SpinBosonExact(p) => {
            let pd = run(spin_boson_pure_dephasing(p))?;
            let times = record_times(ig.dt, ig.t_final, ig.record_stride);
            let states = times
                .iter()
                .map(|&t| Ok(with_coherence(&sc.rho0, run(pd.coherence_factor(t))?)))
                .collect::<Result<Vec<_>, RunError>>()?;
            Ok(Evolution { times, states, joint: None })
        }
        Dynamics::SpinSpin { params, a, b } => {
            let times = record_times(ig.dt, ig.t_final, ig.record_stride);
            let states = times
                .iter()
                .map(|&t| Ok(with_coherence(&sc.rho0, run(spin_spin_coherence_factor(params, t))?)))
                .collect::<Result<Vec<_>, RunError>>()?;
            let joint = if wants_mi {
                Some(times.iter().map(|&t| run(params.full_state(*a, *b, t))).collect::<Result<Vec<_>, RunError>>()?)
            } else {
                None
            };
            Ok(Evolution { times, states, joint })
        }
    }
}

/// Qubit state with populations of `rho0` and `ρ₀₁ = z ρ₀₁(0)`.
fn with_coherence(rho0: &DensityMatrix, z: C64) -> DensityMatrix {
    let mut m = rho0.matrix().clone();
    m[(0, 1)] *= z;
    m[(1, 0)] *= z.conj();
    DensityMatrix::new_unchecked(m)
}

fn scalar_columns(sc: &Scenario) -> Vec<&'static str> {
    let order = ["purity", "entropy", "coherence_magnitude", "mutual_information"];
    order.into_iter().filter(|n| sc.config.wants(n)).collect()
}

fn nearest_record(times: &[f64], t: f64) -> usize {
    let mut best = 0;
    for (k, &s) in times.iter().enumerate() {
        if (s - t).abs() < (times[best] - t).abs() {
            best = k;
        }
    }
    best
}

fn file_name(sc: &Scenario, output: &str, ext: &str) -> String {
    format!("{}_{}.{}", sc.name, output, ext)
}

/// Runs a validated config and writes its files into `opts.out_dir`.
pub fn run_scenario(cfg: &ScenarioConfig, default_name: &str, opts: &RunOptions) -> Result<RunReport, RunError> {
    let mut cfg = cfg.clone();
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    let sc = build(&cfg, default_name)?;
    let evo = evolve_scenario(&sc)?;
    std::fs::create_dir_all(&opts.out_dir).map_err(|e| RunError::io(&opts.out_dir, e))?;
    let mut files: Vec<PathBuf> = Vec::new();

    let coherence = match &sc.coherence {
        Some(p) if cfg.wants("coherence_magnitude") || cfg.fit.is_some() => Some(
            evo.times.iter().zip(&evo.states).map(|(&t, s)| p.eval(s, t)).collect::<Result<Vec<f64>, RunError>>()?,
        ),
        _ => None,
    };

    let columns = scalar_columns(&sc);
    if !columns.is_empty() {
        files.push(write_timeseries(&sc, &evo, &columns, coherence.as_deref(), opts)?);
    }
    if cfg.wants("position_density") {
        files.push(write_position_density(&sc, &evo, opts)?);
    }
    let mut wigner_summaries = Vec::new();
    let snapshots = cfg.snapshot_times();
    if !snapshots.is_empty() {
        let (path, summaries) = write_wigner(&sc, &evo, &snapshots, opts)?;
        files.push(path);
        wigner_summaries = summaries;
    }

    let fit = match (cfg.fit, &coherence) {
        (Some(law), Some(c)) => Some(fit_summary(&sc, law, &evo.times, c)?),
        _ => None,
    };

    let trajectories = match &cfg.trajectories {
        Some(_) => {
            let (path, summary) = run_trajectories(&sc, opts)?;
            files.push(path);
            Some(summary)
        }
        None => None,
    };

    let summary_path = opts.out_dir.join(file_name(&sc, "summary", "json"));
    let mut names: Vec<String> =
        files.iter().filter_map(|p| p.file_name().and_then(|n| n.to_str()).map(str::to_string)).collect();
    names.push(file_name(&sc, "summary", "json"));
    let summary = Summary {
        schema_version: SCHEMA_VERSION,
        scenario: sc.name.clone(),
        model: cfg.kind(),
        seed: cfg.seed,
        records: evo.times.len(),
        t_final: *evo.times.last().unwrap_or(&0.0),
        initial: StateSummary::of(&evo.states[0]),
        final_state: StateSummary::of(evo.states.last().unwrap_or(&sc.rho0)),
        analytic: sc.analytic.clone(),
        fit,
        wigner: wigner_summaries,
        trajectories,
        files: names,
    };
    write_json(&summary_path, &summary)?;
    files.push(summary_path.clone());
    Ok(RunReport { summary, summary_path, files })
}

fn write_timeseries(
    sc: &Scenario,
    evo: &Evolution,
    columns: &[&str],
    coherence: Option<&[f64]>,
    opts: &RunOptions,
) -> Result<PathBuf, RunError> {
    let qubit = sc.rho0.dim() == 2;
    let mut header = vec!["t"];
    if qubit {
        header.extend(["re_rho01", "im_rho01"]);
    }
    header.extend_from_slice(columns);
    let path = opts.out_dir.join(file_name(sc, "timeseries", "csv"));
    let mut table = CsvTable::create(&path, &header)?;
    for (k, (&t, rho)) in evo.times.iter().zip(&evo.states).enumerate() {
        let mut row = vec![fmt_f64(t)];
        if qubit {
            let r = rho.get(0, 1);
            row.push(fmt_f64(r.re));
            row.push(fmt_f64(r.im));
        }
        for &c in columns {
            let v = match c {
                "purity" => purity(rho),
                "entropy" => von_neumann_entropy(rho),
                "coherence_magnitude" => coherence.map(|c| c[k]).unwrap_or(f64::NAN),
                "mutual_information" => {
                    let (da, db) = sc.bipartition.ok_or_else(|| RunError::Config("no bipartition".into()))?;
                    let joint = evo.joint.as_ref().map(|j| &j[k]).unwrap_or(rho);
                    run(quantum_mutual_information(joint, (da, db)))?
                }
                _ => unreachable!("scalar output"),
            };
            row.push(fmt_f64(v));
        }
        table.row(&row)?;
    }
    table.finish()
}

fn write_position_density(sc: &Scenario, evo: &Evolution, opts: &RunOptions) -> Result<PathBuf, RunError> {
    let grid = sc.grid.as_ref().ok_or_else(|| RunError::Config("position_density needs a grid".into()))?;
    let path = opts.out_dir.join(file_name(sc, "position_density", "csv"));
    let mut table = CsvTable::create(&path, &["t", "x", "density"])?;
    for (&t, rho) in evo.times.iter().zip(&evo.states) {
        let density = run(grid.position_density(rho))?;
        for (i, d) in density.into_iter().enumerate() {
            table.row(&[fmt_f64(t), fmt_f64(grid.x(i)), fmt_f64(d)])?;
        }
    }
    table.finish()
}

fn write_wigner(
    sc: &Scenario,
    evo: &Evolution,
    snapshots: &[f64],
    opts: &RunOptions,
) -> Result<(PathBuf, Vec<WignerSummary>), RunError> {
    let grid = sc.grid.as_ref().ok_or_else(|| RunError::Config("wigner_snapshots needs a grid".into()))?;
    let path = opts.out_dir.join(file_name(sc, "wigner", "csv"));
    let mut table = CsvTable::create(&path, &["t", "x", "p", "w"])?;
    let mut summaries = Vec::new();
    for &requested in snapshots {
        let k = nearest_record(&evo.times, requested);
        let (t, rho) = (evo.times[k], &evo.states[k]);
        let field = run(wigner(rho, grid))?;
        let mismatch = run(check_marginals(&field, rho))?.max();
        for (x, p, w) in field.rows() {
            table.row(&[fmt_f64(t), fmt_f64(x), fmt_f64(p), fmt_f64(w)])?;
        }
        let ridge_amplitude = match sc.config.initial_state {
            InitialState::TwoPacketCat { .. } => Some(field.slice_at(0.0).into_iter().fold(0.0f64, |m, w| m.max(w.abs()))),
            _ => None,
        };
        summaries.push(WignerSummary {
            requested_time: requested,
            time: t,
            normalization: field.normalization(),
            marginal_mismatch: mismatch,
            ridge_amplitude,
        });
    }
    Ok((table.finish()?, summaries))
}

fn fit_summary(sc: &Scenario, law: FitLaw, times: &[f64], coherence: &[f64]) -> Result<FitSummary, RunError> {
    let core_law = match law {
        FitLaw::Exponential => DecayLaw::Exponential,
        FitLaw::Gaussian => DecayLaw::Gaussian,
    };
    let f = fit_decay(times, coherence, core_law).map_err(RunError::Numerical)?;
    let relative_error = sc.reference_rate.map(|r| (f.rate - r).abs() / r.abs());
    Ok(FitSummary {
        law,
        rate: f.rate,
        intercept: f.intercept,
        r_squared: f.r_squared,
        residual: f.residual,
        points: f.points,
        window: [FIT_WINDOW.0, FIT_WINDOW.1],
        reference_rate: sc.reference_rate,
        relative_error,
    })
}

fn observables(sc: &Scenario, specs: &[MatrixSpec]) -> Result<Vec<(String, Operator)>, RunError> {
    let dim = sc.rho0.dim();
    if specs.is_empty() {
        if dim != 2 {
            return Err(RunError::Config("trajectories.observables must be given for systems other than a qubit".into()));
        }
        return Ok(vec![("sigma_x".into(), pauli::x()), ("sigma_y".into(), pauli::y()), ("sigma_z".into(), pauli::z())]);
    }
    specs
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let op = operator_from_spec(s, dim)?;
            if !op.is_hermitian(1e-12) {
                return Err(RunError::Config(format!("trajectories.observables[{k}] is not Hermitian")));
            }
            let label = match s {
                MatrixSpec::Named(n) => n.clone(),
                _ => format!("observable_{k}"),
            };
            Ok((label, op))
        })
        .collect()
}

fn run_trajectories(sc: &Scenario, opts: &RunOptions) -> Result<(PathBuf, TrajectorySummary), RunError> {
    let section = sc.config.trajectories.as_ref().expect("checked by caller");
    let gen = sc.generator().ok_or_else(|| RunError::Config("trajectories need a generator-based model".into()))?;
    let ig = sc.config.integrator;
    let scheme = match section.scheme {
        SchemeKind::KrausNormalized => StochasticScheme::KrausNormalized,
        SchemeKind::EulerMaruyama => StochasticScheme::EulerMaruyama,
    };
    let dt = section.dt.unwrap_or(ig.dt);
    let cfg = TrajectoryConfig::new(section.n_trajectories, dt, ig.t_final, sc.config.seed)
        .and_then(|c| c.with_record_stride(section.record_stride.unwrap_or(ig.record_stride)))
        .map_err(RunError::from_setup)?
        .with_scheme(scheme);
    let obs = observables(sc, &section.observables)?;
    let ens = unravel_parallel(gen, &sc.rho0, &cfg, opts.threads)?;
    let det = run(evolve(gen, &sc.rho0, &cfg.integrator()))?;

    let path = opts.out_dir.join(file_name(sc, "trajectories", "csv"));
    let mut header = vec!["trajectory_id", "t"];
    header.extend(obs.iter().map(|(l, _)| l.as_str()));
    let mut table = CsvTable::create(&path, &header)?;
    for (id, states) in ens.conditioned_states.iter().enumerate() {
        for (&t, rho) in ens.times.iter().zip(states) {
            let mut row = vec![id.to_string(), fmt_f64(t)];
            for (_, op) in &obs {
                row.push(fmt_f64(run(rho.expectation(op))?));
            }
            table.row(&row)?;
        }
    }
    let path = table.finish()?;

    let mut summaries = Vec::new();
    for (label, op) in &obs {
        let stats = run(ensemble_statistics(&ens, op))?;
        let deterministic = det.states.iter().map(|s| s.expectation(op)).collect::<decoh_core::Result<Vec<f64>>>();
        let deterministic = run(deterministic)?;
        let max_dev = stats
            .mean
            .iter()
            .zip(&stats.stderr)
            .zip(&deterministic)
            .filter(|((_, &se), _)| se > 1e-12)
            .map(|((m, se), d)| (m - d).abs() / se)
            .fold(0.0f64, f64::max);
        summaries.push(ObservableSummary {
            label: label.clone(),
            mean: stats.mean,
            stderr: stats.stderr,
            deterministic,
            max_deviation_in_stderr: max_dev,
        });
    }
    let summary = TrajectorySummary {
        n_trajectories: ens.len(),
        scheme: section.scheme,
        dt: cfg.effective_dt(),
        max_trace_drift: ens.max_trace_drift,
        times: ens.times.clone(),
        observables: summaries,
    };
    Ok((path, summary))
}
