use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use crate::config::ExperimentConfig;
use crate::experiments::Report;
use crate::svg::line_chart;

pub const RESULTS_HEADER: [&str; 10] =
    ["experiment", "solver", "init", "snr_db", "trial", "mse", "aligned_error", "iterations", "seconds", "converged"];

/// Writes `results.csv`, `config.json`, `truths.json`, `estimates.jsonl`, the
/// extra tables, and optionally traces and charts.
pub fn write_report(cfg: &ExperimentConfig, report: &Report) -> Result<()> {
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;

    let mut w = csv::Writer::from_path(dir.join("results.csv"))?;
    if report.rows.is_empty() {
        w.write_record(RESULTS_HEADER)?;
    }
    for row in &report.rows {
        w.serialize(row)?;
    }
    w.flush()?;

    fs::write(dir.join("config.json"), serde_json::to_string_pretty(cfg)?)?;
    fs::write(dir.join("truths.json"), serde_json::to_string(&report.truths)?)?;
    let mut lines = String::new();
    for e in &report.estimates {
        lines.push_str(&serde_json::to_string(e)?);
        lines.push('\n');
    }
    fs::write(dir.join("estimates.jsonl"), lines)?;

    for t in &report.tables {
        let mut w = csv::Writer::from_path(dir.join(&t.file))?;
        w.write_record(&t.header)?;
        for r in &t.rows {
            w.write_record(r)?;
        }
        w.flush()?;
    }

    if !report.traces.is_empty() {
        let tdir = dir.join("traces");
        fs::create_dir_all(&tdir)?;
        for (name, trace) in &report.traces {
            write_trace(&tdir.join(format!("{name}.csv")), trace)?;
        }
    }

    if cfg.svg {
        for c in &report.charts {
            fs::write(dir.join(&c.file), line_chart(&c.title, &c.x_label, &c.y_label, &c.series))?;
        }
    }
    Ok(())
}

fn write_trace(path: &Path, trace: &[ppr_core::itersolve::TraceRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in trace {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
