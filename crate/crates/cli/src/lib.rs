//! Experiment driver behind the `ppr` binary.
//!
//! Each experiment fans its trials out through [`ppr_core::exec::Exec`] with
//! per-trial seeds, so outputs are identical for any thread count. Rows are
//! sorted before writing.

pub mod config;
pub mod experiments;
pub mod output;
pub mod svg;

pub use config::{Args, ConfigError, Experiment, ExperimentConfig, SchemeKind, Solver};
pub use experiments::{EstimateRecord, Report, ResultRow};

use ppr_core::exec::Exec;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_DIVERGENCE: u8 = 3;

/// Resolve, run and write one experiment.
pub fn run(args: &Args, exec: Exec) -> anyhow::Result<Report> {
    let cfg = ExperimentConfig::resolve(args)?;
    let report = experiments::run(&cfg, exec)?;
    output::write_report(&cfg, &report)?;
    Ok(report)
}

/// Process exit code for a failed run: 2 for configuration errors, 3 for
/// solver divergence, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.chain().any(|c| c.downcast_ref::<ConfigError>().is_some()) {
        return EXIT_CONFIG;
    }
    let core = err.chain().find_map(|c| c.downcast_ref::<ppr_core::Error>());
    match core {
        Some(ppr_core::Error::Diverged { .. }) => EXIT_DIVERGENCE,
        Some(
            ppr_core::Error::NotGenerating { .. }
            | ppr_core::Error::Underdetermined { .. }
            | ppr_core::Error::NonUnitProjection { .. },
        ) => EXIT_CONFIG,
        _ => 1,
    }
}
