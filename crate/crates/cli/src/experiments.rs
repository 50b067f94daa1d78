use std::time::Instant;

use anyhow::{Context, Result};
use ppr_core::algsolve::{solve_algebraic, AlgebraicConfig, KernelMethod};
use ppr_core::diagnostics::{crlb_mse, perturb_full, perturb_single, rank_deficiency_metric, root_separation};
use ppr_core::exec::Exec;
use ppr_core::itersolve::*;
use ppr_core::sigmodel::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{load_signal, ConfigError, Experiment, ExperimentConfig, Solver};
use crate::svg::Series;

/// Squared errors below this count as exact recovery.
pub const SUCCESS_THRESHOLD: f64 = 1e-20;

/// One solver run on one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    pub solver: String,
    pub init: String,
    /// Empty for noiseless data.
    pub snr_db: Option<f64>,
    pub trial: usize,
    /// `min_phi |x_hat e^{j phi} - x|^2`.
    pub mse: f64,
    /// `sqrt(mse) / |x|`.
    pub aligned_error: f64,
    pub iterations: usize,
    pub seconds: f64,
    pub converged: bool,
}

impl ResultRow {
    fn sort_key(&self) -> (&str, &str, &str, f64, usize) {
        (&self.experiment, &self.solver, &self.init, self.snr_db.unwrap_or(f64::INFINITY), self.trial)
    }
}

/// Reconstruction behind a [`ResultRow`], kept for auditing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub experiment: String,
    pub solver: String,
    pub init: String,
    pub snr_db: Option<f64>,
    pub trial: usize,
    /// Index into the ground-truth list.
    pub truth: usize,
    pub estimate: BivariateSignal,
}

/// Extra CSV output.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub file: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(file: &str, header: &[&str]) -> Self {
        Table { file: file.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub file: String,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

#[derive(Debug, Default)]
pub struct Report {
    pub rows: Vec<ResultRow>,
    pub estimates: Vec<EstimateRecord>,
    pub truths: Vec<BivariateSignal>,
    pub tables: Vec<Table>,
    /// `(name, trace)`, written to `traces/<name>.csv`.
    pub traces: Vec<(String, Vec<TraceRow>)>,
    pub charts: Vec<Chart>,
}

impl Report {
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            let (ka, kb) = (a.sort_key(), b.sort_key());
            ka.0.cmp(kb.0)
                .then(ka.1.cmp(kb.1))
                .then(ka.2.cmp(kb.2))
                .then(ka.3.total_cmp(&kb.3))
                .then(ka.4.cmp(&kb.4))
        });
        self.traces.sort_by(|a, b| a.0.cmp(&b.0));
    }
}

/// Seed for `(trial, stream)`, independent of scheduling.
pub fn derived_seed(seed: u64, trial: usize, stream: u64) -> u64 {
    let mut r = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
    r.set_stream(stream);
    r.random()
}

fn trial_rng(seed: u64, trial: usize, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derived_seed(seed, trial, stream))
}

struct Outcome {
    estimate: BivariateSignal,
    iterations: usize,
    seconds: f64,
    converged: bool,
    trace: Vec<TraceRow>,
}

impl Outcome {
    fn failed(n: usize, seconds: f64) -> Self {
        Outcome { estimate: BivariateSignal::zeros(n), iterations: 0, seconds, converged: false, trace: vec![] }
    }
}

struct SolverSettings {
    wf: WfOptions,
    sdp_max_iter: Option<usize>,
}

impl SolverSettings {
    fn new(cfg: &ExperimentConfig) -> Self {
        let mut wf = WfOptions::default();
        if cfg.experiment == Experiment::InitCompare {
            // identical iteration count for every initialisation
            wf.tol = 0.0;
        }
        if let Some(k) = cfg.max_iter {
            wf.max_iter = k;
        }
        SolverSettings { wf, sdp_max_iter: cfg.max_iter }
    }
}

fn is_divergence(e: &ppr_core::Error) -> bool {
    matches!(e, ppr_core::Error::Diverged { .. })
}

/// Runs one solver. Algebraic failures (e.g. a vanishing phase link under
/// heavy noise) yield a zero estimate flagged as not converged; divergence
/// of an iterative solver is an error.
fn run_solver(
    solver: Solver,
    y: &MeasurementSet,
    scheme: &MeasurementScheme,
    n: usize,
    init_seed: u64,
    settings: &SolverSettings,
) -> Result<Outcome, ppr_core::Error> {
    let start = Instant::now();
    let algebraic = |method| {
        let cfg = AlgebraicConfig { method, n: Some(n), ..Default::default() };
        solve_algebraic(y, scheme, &cfg).map(|s| s.signal)
    };
    let wf = |init: WfInit| -> Result<Outcome, ppr_core::Error> {
        let prob = LiftedProblem::new(y, scheme, n)?;
        let x0 = match init.build(&prob, y, scheme) {
            Ok(x0) => x0,
            Err(e) if !is_divergence(&e) => return Ok(Outcome::failed(n, start.elapsed().as_secs_f64())),
            Err(e) => return Err(e),
        };
        let res = wf_solve(&prob, &x0, &settings.wf)?;
        Ok(Outcome {
            estimate: res.signal,
            iterations: res.iterations,
            seconds: start.elapsed().as_secs_f64(),
            converged: res.converged,
            trace: res.trace,
        })
    };
    match solver {
        Solver::Right | Solver::Left => {
            let method = if solver == Solver::Right { KernelMethod::Right } else { KernelMethod::Left };
            Ok(match algebraic(method) {
                Ok(estimate) => Outcome { estimate, iterations: 0, seconds: start.elapsed().as_secs_f64(), converged: true, trace: vec![] },
                Err(e) if is_divergence(&e) => return Err(e),
                Err(_) => Outcome::failed(n, start.elapsed().as_secs_f64()),
            })
        }
        Solver::Sdp => {
            let prob = LiftedProblem::new(y, scheme, n)?;
            let mut opts = SdpOptions::for_measurements(y);
            if let Some(k) = settings.sdp_max_iter {
                opts.max_iter = k;
            }
            let res = sdp_solve(&prob, &opts)?;
            Ok(Outcome {
                estimate: res.signal,
                iterations: res.iterations,
                seconds: start.elapsed().as_secs_f64(),
                converged: res.converged,
                trace: res.trace,
            })
        }
        Solver::WfSpectral => wf(WfInit::Spectral),
        Solver::WfRandom => wf(WfInit::RandomPhase { seed: init_seed }),
        Solver::WfRight => wf(WfInit::Sylvester(KernelMethod::Right)),
        Solver::WfLeft => wf(WfInit::Sylvester(KernelMethod::Left)),
    }
}

/// Everything one solver run contributes to the report.
struct Run {
    row: ResultRow,
    estimate: EstimateRecord,
    trace: Vec<TraceRow>,
    trace_name: Option<String>,
}

struct Job<'a> {
    experiment: String,
    solver: Solver,
    snr_db: Option<f64>,
    trial: usize,
    truth_index: usize,
    truth: &'a BivariateSignal,
    y: &'a MeasurementSet,
    scheme: &'a MeasurementScheme,
    init_seed: u64,
    trace_name: Option<String>,
}

fn execute(job: Job<'_>, settings: &SolverSettings) -> Result<Run> {
    let n = job.truth.len();
    let out = run_solver(job.solver, job.y, job.scheme, n, job.init_seed, settings)
        .with_context(|| format!("{} {} trial {}", job.experiment, job.solver.label(), job.trial))?;
    let mse = mse_realigned(&out.estimate, job.truth)?;
    let row = ResultRow {
        experiment: job.experiment.clone(),
        solver: job.solver.name().into(),
        init: job.solver.init().into(),
        snr_db: job.snr_db,
        trial: job.trial,
        mse,
        aligned_error: mse.sqrt() / job.truth.norm(),
        iterations: out.iterations,
        seconds: out.seconds,
        converged: out.converged,
    };
    let estimate = EstimateRecord {
        experiment: job.experiment,
        solver: row.solver.clone(),
        init: row.init.clone(),
        snr_db: job.snr_db,
        trial: job.trial,
        truth: job.truth_index,
        estimate: out.estimate,
    };
    Ok(Run { row, estimate, trace: out.trace, trace_name: job.trace_name })
}

impl Report {
    fn absorb(&mut self, runs: Vec<Run>) {
        for r in runs {
            self.rows.push(r.row);
            self.estimates.push(r.estimate);
            if let Some(name) = r.trace_name.filter(|_| !r.trace.is_empty()) {
                self.traces.push((name, r.trace));
            }
        }
    }
}

fn db(v: f64) -> f64 {
    10.0 * v.log10()
}

fn fmt(v: f64) -> String {
    format!("{v:e}")
}

fn noisy(y0: &MeasurementSet, x: &BivariateSignal, scheme: &MeasurementScheme, snr: f64, seed: u64) -> Result<MeasurementSet> {
    let s2 = sigma2_for_snr(x, scheme, snr)?;
    Ok(add_noise(y0, s2, seed))
}

fn ground_truth(cfg: &ExperimentConfig, fallback: impl FnOnce() -> BivariateSignal) -> Result<BivariateSignal> {
    Ok(match &cfg.signal {
        Some(path) => load_signal(path)?,
        None => fallback(),
    })
}

fn trace_name(solver: Solver, snr: Option<f64>, trial: usize) -> String {
    match snr {
        Some(s) => format!("{}-{s}dB_{trial}", solver.label()),
        None => format!("{}_{trial}", solver.label()),
    }
}

pub fn run(cfg: &ExperimentConfig, exec: Exec) -> Result<Report> {
    let mut report = match cfg.experiment {
        Experiment::NoiselessPulse => noiseless_pulse(cfg, exec)?,
        Experiment::InitCompare => init_compare(cfg, exec)?,
        Experiment::SnrSweep => snr_sweep(cfg, exec)?,
        Experiment::SchemeCompare => scheme_compare(cfg, exec)?,
        Experiment::UniquenessStudy => uniqueness_study(cfg, exec)?,
        Experiment::CrlbTable => crlb_table(cfg)?,
    };
    report.sort();
    Ok(report)
}

fn noiseless_pulse(cfg: &ExperimentConfig, exec: Exec) -> Result<Report> {
    let scheme = cfg.scheme()?;
    let x = ground_truth(cfg, || synth::chirped_pulse(cfg.n))?;
    let y = measure(&x, &scheme);
    let settings = SolverSettings::new(cfg);
    let name = cfg.experiment.name();
    let jobs: Vec<(Solver, usize)> = (0..cfg.trials).flat_map(|t| cfg.solvers.iter().map(move |&s| (s, t))).collect();
    let runs = exec.try_map(jobs.len(), |k| {
        let (solver, trial) = jobs[k];
        execute(
            Job {
                experiment: name.into(),
                solver,
                snr_db: None,
                trial,
                truth_index: 0,
                truth: &x,
                y: &y,
                scheme: &scheme,
                init_seed: derived_seed(cfg.seed, trial, 2),
                trace_name: cfg.traces.then(|| trace_name(solver, None, trial)),
            },
            &settings,
        )
    })?;

    let mut errors = Table::new("pulse_errors.csv", &["solver", "init", "trial", "sample", "sq_error"]);
    let mut success = Table::new("success.csv", &["solver", "init", "trial", "mse", "success", "ratio_to_best_algebraic"]);
    let mut series = Vec::new();
    let best_algebraic = |trial: usize| {
        runs.iter()
            .filter(|r| r.row.trial == trial && matches!(r.row.solver.as_str(), "right-sylvester" | "left-sylvester"))
            .map(|r| r.row.mse)
            .fold(f64::INFINITY, f64::min)
    };
    for r in &runs {
        let aligned = align_phase(&r.estimate.estimate, &x);
        let per_sample: Vec<f64> = (0..x.len())
            .map(|k| {
                let (a, b) = (aligned.sample(k), x.sample(k));
                (a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()
            })
            .collect();
        for (k, e) in per_sample.iter().enumerate() {
            errors.push(vec![r.row.solver.clone(), r.row.init.clone(), r.row.trial.to_string(), k.to_string(), fmt(*e)]);
        }
        let best = best_algebraic(r.row.trial);
        success.push(vec![
            r.row.solver.clone(),
            r.row.init.clone(),
            r.row.trial.to_string(),
            fmt(r.row.mse),
            (r.row.mse < SUCCESS_THRESHOLD).to_string(),
            if best.is_finite() && best > 0.0 { fmt(r.row.mse / best) } else { String::new() },
        ]);
        if r.row.trial == 0 {
            let label = format!("{} ({})", r.row.solver, r.row.init);
            series.push(Series::new(&label, per_sample.iter().enumerate().map(|(k, e)| (k as f64, e.max(1e-40).log10())).collect()));
        }
    }
    let mut report = Report { truths: vec![x], tables: vec![errors, success], ..Default::default() };
    report.charts.push(Chart {
        file: "pulse_errors.svg".into(),
        title: "Per-sample squared error".into(),
        x_label: "sample".into(),
        y_label: "log10 squared error".into(),
        series,
    });
    report.absorb(runs);
    Ok(report)
}

fn init_compare(cfg: &ExperimentConfig, exec: Exec) -> Result<Report> {
    let scheme = cfg.scheme()?;
    let settings = SolverSettings::new(cfg);
    let name = cfg.experiment.name();
    let truths: Vec<BivariateSignal> = match &cfg.signal {
        Some(path) => vec![load_signal(path)?; cfg.trials],
        None => (0..cfg.trials).map(|t| synth::random_signal(cfg.n, &mut trial_rng(cfg.seed, t, 0))).collect(),
    };
    let cells: Vec<(usize, usize)> = (0..cfg.trials).flat_map(|t| (0..cfg.snr_list.len()).map(move |s| (t, s))).collect();
    let per_cell = exec.try_map(cells.len(), |k| -> Result<Vec<Run>> {
        let (trial, si) = cells[k];
        let snr = cfg.snr_list[si];
        let x = &truths[trial];
        let y = noisy(&measure(x, &scheme), x, &scheme, snr, derived_seed(cfg.seed, trial, 10 + si as u64))?;
        cfg.solvers
            .iter()
            .map(|&solver| {
                execute(
                    Job {
                        experiment: name.into(),
                        solver,
                        snr_db: Some(snr),
                        trial,
                        truth_index: trial,
                        truth: x,
                        y: &y,
                        scheme: &scheme,
                        init_seed: derived_seed(cfg.seed, trial, 1000 + si as u64),
                        trace_name: cfg.traces.then(|| trace_name(solver, Some(snr), trial)),
                    },
                    &settings,
                )
            })
            .collect()
    })?;
    let runs: Vec<Run> = per_cell.into_iter().flatten().collect();

    let mut summary = Table::new("summary.csv", &["snr_db", "solver", "init", "mean_mse", "mean_mse_db", "mean_final_cost"]);
    let mut mean_trace = Table::new("mean_traces.csv", &["snr_db", "solver", "init", "k", "mean_cost", "mean_residual", "runs"]);
    let mut series = Vec::new();
    for &solver in &cfg.solvers {
        let mut pts = Vec::new();
        for &snr in &cfg.snr_list {
            let sel: Vec<&Run> = runs.iter().filter(|r| r.row.snr_db == Some(snr) && r.row.init == solver.init() && r.row.solver == solver.name()).collect();
            let mean = sel.iter().map(|r| r.row.mse).sum::<f64>() / sel.len() as f64;
            let costs: Vec<f64> = sel.iter().filter_map(|r| r.trace.last()).map(|t| t.cost).collect();
            let cost = if costs.is_empty() { f64::NAN } else { costs.iter().sum::<f64>() / costs.len() as f64 };
            summary.push(vec![snr.to_string(), solver.name().into(), solver.init().into(), fmt(mean), format!("{:.3}", db(mean)), fmt(cost)]);
            pts.push((snr, db(mean)));
            let len = sel.iter().map(|r| r.trace.len()).max().unwrap_or(0);
            for k in 0..len {
                let at: Vec<&TraceRow> = sel.iter().filter_map(|r| r.trace.get(k)).collect();
                let c = at.iter().map(|t| t.cost).sum::<f64>() / at.len() as f64;
                let res = at.iter().map(|t| t.residual).sum::<f64>() / at.len() as f64;
                mean_trace.push(vec![snr.to_string(), solver.name().into(), solver.init().into(), (k + 1).to_string(), fmt(c), fmt(res), at.len().to_string()]);
            }
        }
        series.push(Series::new(solver.label(), pts));
    }
    let mut report = Report { truths, tables: vec![summary, mean_trace], ..Default::default() };
    report.charts.push(Chart {
        file: "init_compare.svg".into(),
        title: "Final MSE by initialization".into(),
        x_label: "SNR (dB)".into(),
        y_label: "mean MSE (dB)".into(),
        series,
    });
    report.absorb(runs);
    Ok(report)
}

/// Monte-Carlo sweep over SNR for one scheme; `tag` labels the scheme.
fn sweep(
    cfg: &ExperimentConfig,
    exec: Exec,
    scheme: &MeasurementScheme,
    tag: &str,
    x: &BivariateSignal,
    report: &mut Report,
    summary: &mut Table,
) -> Result<()> {
    let settings = SolverSettings::new(cfg);
    let experiment = if tag.is_empty() { cfg.experiment.name().to_string() } else { format!("{}/{tag}", cfg.experiment.name()) };
    let y0 = measure(x, scheme);
    let cells: Vec<(usize, usize)> = (0..cfg.snr_list.len()).flat_map(|s| (0..cfg.trials).map(move |t| (s, t))).collect();
    let per_cell = exec.try_map(cells.len(), |k| -> Result<Vec<Run>> {
        let (si, trial) = cells[k];
        let snr = cfg.snr_list[si];
        let y = noisy(&y0, x, scheme, snr, derived_seed(cfg.seed, trial, 10 + si as u64))?;
        cfg.solvers
            .iter()
            .map(|&solver| {
                execute(
                    Job {
                        experiment: experiment.clone(),
                        solver,
                        snr_db: Some(snr),
                        trial,
                        truth_index: 0,
                        truth: x,
                        y: &y,
                        scheme,
                        init_seed: derived_seed(cfg.seed, trial, 1000 + si as u64),
                        trace_name: cfg.traces.then(|| {
                            let base = trace_name(solver, Some(snr), trial);
                            if tag.is_empty() { base } else { format!("{tag}-{base}") }
                        }),
                    },
                    &settings,
                )
            })
            .collect()
    })?;
    let runs: Vec<Run> = per_cell.into_iter().flatten().collect();
    let crlb: Vec<f64> = cfg
        .snr_list
        .iter()
        .map(|&snr| crlb_mse(x, scheme, sigma2_for_snr(x, scheme, snr)?))
        .collect::<ppr_core::Result<_>>()?;
    let energy = x.energy();
    let prefix = if tag.is_empty() { String::new() } else { format!("{tag} ") };
    for &solver in &cfg.solvers {
        let mut pts = Vec::new();
        for (si, &snr) in cfg.snr_list.iter().enumerate() {
            let sel: Vec<f64> = runs
                .iter()
                .filter(|r| r.row.snr_db == Some(snr) && r.row.solver == solver.name() && r.row.init == solver.init())
                .map(|r| r.row.mse)
                .collect();
            let mean = sel.iter().sum::<f64>() / sel.len() as f64;
            let mut row = vec![];
            if !tag.is_empty() {
                row.push(tag.to_string());
            }
            row.extend([
                solver.name().to_string(),
                solver.init().to_string(),
                snr.to_string(),
                fmt(mean),
                format!("{:.3}", db(mean / energy)),
                fmt(crlb[si]),
                format!("{:.3}", db(crlb[si] / energy)),
            ]);
            summary.push(row);
            pts.push((snr, db(mean / energy)));
        }
        report.charts[0].series.push(Series::new(&format!("{prefix}{}", solver.label()), pts));
    }
    report.charts[0].series.push(Series::new(
        &format!("{prefix}CRLB"),
        cfg.snr_list.iter().zip(&crlb).map(|(&s, &c)| (s, db(c / energy))).collect(),
    ));
    report.absorb(runs);
    Ok(())
}

fn sweep_chart() -> Chart {
    Chart {
        file: "mse_vs_snr.svg".into(),
        title: "Relative MSE versus SNR".into(),
        x_label: "SNR (dB)".into(),
        y_label: "relative MSE (dB)".into(),
        series: vec![],
    }
}

const SWEEP_COLUMNS: [&str; 7] = ["solver", "init", "snr_db", "mean_mse", "mean_mse_db", "crlb_mse", "crlb_db"];

fn snr_sweep(cfg: &ExperimentConfig, exec: Exec) -> Result<Report> {
    let scheme = cfg.scheme()?;
    let x = ground_truth(cfg, || synth::random_signal(cfg.n, &mut trial_rng(cfg.seed, 0, 0)))?;
    let mut report = Report { truths: vec![x.clone()], charts: vec![sweep_chart()], ..Default::default() };
    let mut summary = Table::new("summary.csv", &SWEEP_COLUMNS);
    sweep(cfg, exec, &scheme, "", &x, &mut report, &mut summary)?;
    report.tables.push(summary);
    Ok(report)
}

/// The three schemes compared: baseline, sphere analysers, oversampled frequencies.
pub fn comparison_schemes(n: usize) -> Result<Vec<(String, MeasurementScheme)>> {
    let m = 2 * n - 1;
    Ok(vec![
        (format!("simple-m{m}-p4"), simple_scheme(m)?),
        (format!("sphere-m{m}-p12"), sphere_scheme(m, None)?),
        (format!("simple-m{}-p4", 3 * m), simple_scheme(3 * m)?),
    ])
}

fn scheme_compare(cfg: &ExperimentConfig, exec: Exec) -> Result<Report> {
    let x = ground_truth(cfg, || synth::random_signal(cfg.n, &mut trial_rng(cfg.seed, 0, 0)))?;
    let mut report = Report { truths: vec![x.clone()], charts: vec![sweep_chart()], ..Default::default() };
    let mut header = vec!["scheme"];
    header.extend(SWEEP_COLUMNS);
    let mut summary = Table::new("summary.csv", &header);
    for (tag, scheme) in comparison_schemes(cfg.n)? {
        sweep(cfg, exec, &scheme, &tag, &x, &mut report, &mut summary)?;
    }
    report.tables.push(summary);
    Ok(report)
}

fn uniqueness_study(cfg: &ExperimentConfig, exec: Exec) -> Result<Report> {
    const RANK_TOL: f64 = 1e-10;
    let x = ground_truth(cfg, || synth::constant_polarization(cfg.n, &mut trial_rng(cfg.seed, 0, 0)))?;
    let mut table = Table::new("uniqueness.csv", &["model", "sigma", "trials", "mean_rank_deficiency", "mean_root_separation"]);
    let mut charts = vec![];
    for (mi, model) in ["full", "single"].into_iter().enumerate() {
        let mut pts = Vec::new();
        for (si, &sigma) in cfg.sigmas.iter().enumerate() {
            let stats = exec.map(cfg.trials, |t| {
                let mut r = trial_rng(cfg.seed, t, 100 * (mi as u64 + 1) + si as u64);
                let xp = if mi == 0 { perturb_full(&x, sigma * sigma, &mut r) } else { perturb_single(&x, sigma * sigma, &mut r) };
                (rank_deficiency_metric(&xp, RANK_TOL) as f64, root_separation(&xp))
            });
            let k = stats.len() as f64;
            let rank = stats.iter().map(|s| s.0).sum::<f64>() / k;
            let sep = stats.iter().map(|s| s.1).sum::<f64>() / k;
            table.push(vec![model.into(), fmt(sigma), cfg.trials.to_string(), format!("{rank}"), fmt(sep)]);
            pts.push((sigma.max(1e-300).log10(), rank));
        }
        charts.push(Series::new(model, pts));
    }
    Ok(Report {
        truths: vec![x],
        tables: vec![table],
        charts: vec![Chart {
            file: "uniqueness.svg".into(),
            title: "Sylvester rank deficiency under perturbation".into(),
            x_label: "log10 sigma".into(),
            y_label: "mean rank deficiency".into(),
            series: charts,
        }],
        ..Default::default()
    })
}

fn crlb_table(cfg: &ExperimentConfig) -> Result<Report> {
    let scheme = cfg.scheme()?;
    let x = ground_truth(cfg, || synth::random_signal(cfg.n, &mut trial_rng(cfg.seed, 0, 0)))?;
    if cfg.m < x.len() {
        return Err(ConfigError(format!("M = {} is smaller than N = {}", cfg.m, x.len())).into());
    }
    let mut table = Table::new("crlb.csv", &["snr_db", "sigma2", "crlb_mse", "crlb_db"]);
    let mut pts = Vec::new();
    let energy = x.energy();
    for &snr in &cfg.snr_list {
        let s2 = sigma2_for_snr(&x, &scheme, snr)?;
        let b = crlb_mse(&x, &scheme, s2)?;
        table.push(vec![snr.to_string(), fmt(s2), fmt(b), format!("{:.6}", db(b / energy))]);
        pts.push((snr, db(b / energy)));
    }
    Ok(Report {
        truths: vec![x],
        tables: vec![table],
        charts: vec![Chart {
            file: "crlb.svg".into(),
            title: "Cramer-Rao bound".into(),
            x_label: "SNR (dB)".into(),
            y_label: "relative CRLB (dB)".into(),
            series: vec![Series::new("CRLB", pts)],
        }],
        ..Default::default()
    })
}
