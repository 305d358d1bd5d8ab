//! Side-by-side comparison of several algorithms on one problem.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::output::{write_json, write_outcome};
use crate::report::RunReport;
use crate::runner::run_experiment;

pub const SWEEP_FILE: &str = "sweep.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub label: String,
    pub report: RunReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub name: String,
    pub rows: Vec<SweepRow>,
}

/// Distinct directory labels, suffixing repeats with their position.
fn labels(variants: &[ExperimentConfig]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    variants
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let base = v.algorithm.label();
            if seen.insert(base.clone()) {
                base
            } else {
                format!("{base}-{i}")
            }
        })
        .collect()
}

pub fn run_sweep(
    config: &ExperimentConfig,
    dir: &Path,
    workers: usize,
) -> anyhow::Result<SweepReport> {
    let variants = config.sweep_variants();
    let mut rows = Vec::with_capacity(variants.len());
    for (variant, label) in variants.iter().zip(labels(&variants)) {
        let outcome = run_experiment(variant, workers)?;
        let report = write_outcome(&dir.join(&label), &outcome)?;
        rows.push(SweepRow { label, report });
    }
    let report = SweepReport {
        name: config.name.clone(),
        rows,
    };
    write_json(&dir.join(SWEEP_FILE), &report)?;
    Ok(report)
}

/// Plain-text table with one row per configuration and the final mean of
/// each merit.
pub fn render_table(report: &SweepReport) -> String {
    let columns: BTreeSet<&String> = report
        .rows
        .iter()
        .flat_map(|r| r.report.merits.keys())
        .collect();
    let mut out = format!("{:<28} {:>9}", "configuration", "diverged");
    for c in &columns {
        out += &format!(" {:>26}", format!("{c} (mean ± 95%)"));
    }
    out.push('\n');
    for row in &report.rows {
        out += &format!("{:<28} {:>9}", row.label, row.report.diverged_count);
        for c in &columns {
            let cell = match row.report.merits.get(*c) {
                Some(m) => match m.final_ci_half_width {
                    Some(h) => format!("{:.4e} ± {:.2e}", m.final_mean, h),
                    None => format!("{:.4e}", m.final_mean),
                },
                None => "-".into(),
            };
            out += &format!(" {cell:>26}");
        }
        out.push('\n');
    }
    out
}
