use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use ppr_core::sigmodel::{generating_family, simple_scheme, sphere_scheme, BivariateSignal, MeasurementScheme};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    NoiselessPulse,
    InitCompare,
    SnrSweep,
    SchemeCompare,
    UniquenessStudy,
    CrlbTable,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::NoiselessPulse => "noiseless-pulse",
            Experiment::InitCompare => "init-compare",
            Experiment::SnrSweep => "snr-sweep",
            Experiment::SchemeCompare => "scheme-compare",
            Experiment::UniquenessStudy => "uniqueness-study",
            Experiment::CrlbTable => "crlb-table",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    /// Horizontal, vertical, diagonal and circular analysers (P <= 4).
    Simple,
    /// Analysers at the coarsest HEALPix centres (P <= 12).
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Right,
    Left,
    Sdp,
    WfSpectral,
    WfRandom,
    WfRight,
    WfLeft,
}

impl Solver {
    /// Value of the `solver` column.
    pub fn name(self) -> &'static str {
        match self {
            Solver::Right => "right-sylvester",
            Solver::Left => "left-sylvester",
            Solver::Sdp => "sdp",
            _ => "wf",
        }
    }

    /// Value of the `init` column.
    pub fn init(self) -> &'static str {
        match self {
            Solver::WfSpectral => "spectral",
            Solver::WfRandom => "random-phase",
            Solver::WfRight => "right-sylvester",
            Solver::WfLeft => "left-sylvester",
            _ => "none",
        }
    }

    /// Short label used in file names and chart legends.
    pub fn label(self) -> &'static str {
        match self {
            Solver::Right => "right",
            Solver::Left => "left",
            Solver::Sdp => "sdp",
            Solver::WfSpectral => "wf-spectral",
            Solver::WfRandom => "wf-random",
            Solver::WfRight => "wf-right",
            Solver::WfLeft => "wf-left",
        }
    }

    pub fn is_algebraic(self) -> bool {
        matches!(self, Solver::Right | Solver::Left | Solver::WfRight | Solver::WfLeft)
    }
}

/// Command line of `ppr`.
#[derive(Debug, Clone, Parser)]
#[command(name = "ppr", version, about = "Polarimetric phase retrieval experiments")]
pub struct Args {
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// Signal length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of DFT frequencies (default 2N - 1).
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of polarization analysers.
    #[arg(long)]
    pub p: Option<usize>,
    /// Comma-separated SNR values in dB.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub snr: Option<Vec<f64>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub solvers: Option<Vec<Solver>>,
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeKind>,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
    /// Also write SVG line charts.
    #[arg(long)]
    pub svg: bool,
    /// Write per-trial convergence traces of the iterative solvers.
    #[arg(long)]
    pub traces: bool,
    /// Ground-truth signal file (JSON) instead of the built-in generator.
    #[arg(long)]
    pub signal: Option<PathBuf>,
    /// Iteration cap for the iterative solvers.
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Comma-separated perturbation levels for the uniqueness study.
    #[arg(long, value_delimiter = ',')]
    pub sigmas: Option<Vec<f64>>,
}

/// Invalid combination of options; reported with exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Fully resolved experiment parameters; written to `config.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "P")]
    pub p: usize,
    pub scheme: SchemeKind,
    pub snr_list: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub solvers: Vec<Solver>,
    pub output_dir: PathBuf,
    pub svg: bool,
    pub traces: bool,
    pub signal: Option<PathBuf>,
    pub max_iter: Option<usize>,
    pub sigmas: Vec<f64>,
}

fn snr_grid() -> Vec<f64> {
    (0..=8).map(|k| 10.0 * k as f64).collect()
}

fn sigma_grid() -> Vec<f64> {
    (2..=16).rev().map(|k| 10f64.powi(-k)).collect()
}

impl ExperimentConfig {
    /// Defaults for `experiment`, overridden by whatever `args` sets, then validated.
    pub fn resolve(args: &Args) -> Result<Self, ConfigError> {
        use Experiment::*;
        let e = args.experiment;
        let default_n = if e == NoiselessPulse { 64 } else { 32 };
        let signal_n = match &args.signal {
            Some(path) => Some(load_signal(path)?.len()),
            None => None,
        };
        let n = match (args.n, signal_n) {
            (Some(a), Some(b)) if a != b => {
                return Err(ConfigError(format!("--n {a} disagrees with the signal file length {b}")))
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => default_n,
        };
        let scheme = args.scheme.unwrap_or(SchemeKind::Simple);
        let p = args.p.unwrap_or(match scheme {
            SchemeKind::Simple => 4,
            SchemeKind::Sphere => 12,
        });
        let snr_list = args.snr.clone().unwrap_or_else(|| match e {
            NoiselessPulse | UniquenessStudy => vec![],
            InitCompare => vec![10.0, 40.0, 60.0],
            SnrSweep | SchemeCompare | CrlbTable => snr_grid(),
        });
        let trials = args.trials.unwrap_or(match e {
            NoiselessPulse | CrlbTable => 1,
            UniquenessStudy => 1000,
            _ => 100,
        });
        let solvers = args.solvers.clone().unwrap_or_else(|| match e {
            NoiselessPulse => vec![Solver::Right, Solver::Left, Solver::Sdp, Solver::WfSpectral, Solver::WfRight],
            InitCompare => vec![Solver::WfSpectral, Solver::WfRandom, Solver::WfRight, Solver::WfLeft],
            SnrSweep | SchemeCompare => vec![Solver::Right, Solver::Left, Solver::WfRight],
            UniquenessStudy | CrlbTable => vec![],
        });
        let cfg = ExperimentConfig {
            experiment: e,
            n,
            m: args.m.unwrap_or(2 * n.max(1) - 1),
            p,
            scheme,
            snr_list,
            trials,
            seed: args.seed,
            solvers,
            output_dir: args.out.clone(),
            svg: args.svg,
            traces: args.traces,
            signal: args.signal.clone(),
            max_iter: args.max_iter,
            sigmas: args.sigmas.clone().unwrap_or_else(sigma_grid),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |s: String| Err(ConfigError(s));
        if self.trials == 0 {
            return err("trials must be at least 1".into());
        }
        if self.n == 0 {
            return err("N must be positive".into());
        }
        if self.m == 0 {
            return err("M must be positive".into());
        }
        if self.solvers.iter().any(|s| s.is_algebraic()) && self.m < 2 * self.n - 1 {
            return err(format!("algebraic solvers need M >= 2N - 1 = {}, got {}", 2 * self.n - 1, self.m));
        }
        if self.snr_list.iter().any(|s| !s.is_finite()) {
            return err("SNR values must be finite".into());
        }
        if self.experiment == Experiment::UniquenessStudy && self.sigmas.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return err("perturbation levels must be finite and nonnegative".into());
        }
        if self.max_iter == Some(0) {
            return err("--max-iter must be positive".into());
        }
        if self.experiment != Experiment::SchemeCompare {
            self.scheme_with_m(self.m)?;
        }
        Ok(())
    }

    /// The configured analysers with `m` frequencies.
    pub fn scheme_with_m(&self, m: usize) -> Result<MeasurementScheme, ConfigError> {
        let full = match self.scheme {
            SchemeKind::Simple => simple_scheme(m),
            SchemeKind::Sphere => sphere_scheme(m, None),
        }
        .map_err(|e| ConfigError(e.to_string()))?;
        let available = full.p();
        if self.p == 0 || self.p > available {
            return Err(ConfigError(format!("the {:?} scheme offers 1..={available} analysers, got P = {}", self.scheme, self.p)));
        }
        let scheme = MeasurementScheme::new(m, full.projections()[..self.p].to_vec()).map_err(|e| ConfigError(e.to_string()))?;
        if !generating_family(&scheme) {
            return Err(ConfigError(format!("P = {} analysers do not form a generating family", self.p)));
        }
        Ok(scheme)
    }

    pub fn scheme(&self) -> Result<MeasurementScheme, ConfigError> {
        self.scheme_with_m(self.m)
    }
}

pub fn load_signal(path: &std::path::Path) -> Result<BivariateSignal, ConfigError> {
    BivariateSignal::load(path).map_err(|e| ConfigError(format!("cannot read signal {}: {e}", path.display())))
}

