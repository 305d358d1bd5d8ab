//! On-disk artifacts: per-seed trace CSVs, the report JSON and plot data.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use rayon::prelude::*;

use crate::report::{
    active_columns, build_report, mean_and_half_width, merit_value, RunReport, MERIT_COLUMNS,
};
use crate::runner::{ExperimentOutcome, SeedRun};

pub const TRACE_HEADER: [&str; 9] = [
    "iter",
    "eta",
    "delta",
    "sum_delta_sq",
    "gap_avg",
    "gap_last",
    "wardrop",
    "grad_norm_sq",
    "diverged",
];

pub const REPORT_FILE: &str = "report.json";
pub const PLOT_FILE: &str = "plot.csv";

/// 17 significant digits.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

pub fn trace_file_name(seed: u64) -> String {
    format!("trace_seed{seed}.csv")
}

fn csv_writer(path: &Path) -> anyhow::Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))
}

pub fn write_trace(path: &Path, run: &SeedRun) -> anyhow::Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(TRACE_HEADER)?;
    let merits: HashMap<usize, _> = run.merits.iter().map(|m| (m.n, m)).collect();
    let last = run.trace.steps.len();
    for (k, s) in run.trace.steps.iter().enumerate() {
        let m = merits.get(&s.n);
        let diverged = run.trace.diverged && k + 1 == last;
        let mut record = vec![
            s.n.to_string(),
            fmt_float(s.eta),
            fmt_float(s.delta),
            fmt_float(s.sum_delta_sq),
        ];
        record.extend(
            MERIT_COLUMNS
                .iter()
                .map(|c| fmt_opt(m.and_then(|m| merit_value(m, c)))),
        );
        record.push(u8::from(diverged).to_string());
        w.write_record(&record)?;
    }
    w.flush()
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Mean merit with its 95% band at the checkpoints every seed reached.
pub fn write_plot(path: &Path, outcome: &ExperimentOutcome) -> anyhow::Result<()> {
    let columns = active_columns(&outcome.config.merit.measures);
    let mut w = csv_writer(path)?;
    let mut header = vec!["iter".to_string()];
    for c in &columns {
        header.extend([
            format!("{c}_mean"),
            format!("{c}_ci_low"),
            format!("{c}_ci_high"),
        ]);
    }
    w.write_record(&header)?;
    let rows = outcome
        .runs
        .iter()
        .map(|r| r.merits.len())
        .min()
        .unwrap_or(0);
    for k in 0..rows {
        let n = outcome.runs[0].merits[k].n;
        let mut record = vec![n.to_string()];
        for c in &columns {
            let values: Vec<f64> = outcome
                .runs
                .iter()
                .filter_map(|r| merit_value(&r.merits[k], c))
                .collect();
            let (mean, half) = mean_and_half_width(&values);
            let half = half.unwrap_or(0.0);
            record.extend([
                fmt_float(mean),
                fmt_float(mean - half),
                fmt_float(mean + half),
            ]);
        }
        w.write_record(&record)?;
    }
    w.flush()
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

/// Writes all artifacts of one experiment into `dir` and returns its report.
pub fn write_outcome(dir: &Path, outcome: &ExperimentOutcome) -> anyhow::Result<RunReport> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    outcome
        .runs
        .par_iter()
        .map(|run| write_trace(&dir.join(trace_file_name(run.seed)), run))
        .collect::<anyhow::Result<()>>()?;
    let report = build_report(outcome);
    write_json(&dir.join(REPORT_FILE), &report)?;
    write_plot(&dir.join(PLOT_FILE), outcome)?;
    Ok(report)
}

/// Output directory: an explicit `--out`, else `<root>/<output.dir or name>`
/// where the root comes from the environment or defaults to `out`.
pub fn resolve_output_dir(
    explicit: Option<&Path>,
    env_root: Option<&Path>,
    config: &crate::config::ExperimentConfig,
) -> PathBuf {
    if let Some(dir) = explicit {
        return dir.to_path_buf();
    }
    let root = env_root
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("out"));
    match &config.output.dir {
        Some(d) if d.is_absolute() => d.clone(),
        Some(d) => root.join(d),
        None => root.join(&config.name),
    }
}
