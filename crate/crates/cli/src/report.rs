//! Cross-seed summaries: rate fits, final-merit means and t-intervals.

use std::collections::BTreeMap;

use adaprox::merit::fit_rate;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::config::Measure;
use crate::runner::{ExperimentOutcome, MeritRow, SeedRun};

/// Columns of the merit table, in trace-file order.
pub const MERIT_COLUMNS: [&str; 4] = ["gap_avg", "gap_last", "wardrop", "grad_norm_sq"];

pub fn merit_value(row: &MeritRow, column: &str) -> Option<f64> {
    match column {
        "gap_avg" => row.gap_avg,
        "gap_last" => row.gap_last,
        "wardrop" => row.wardrop,
        "grad_norm_sq" => row.grad_norm_sq,
        _ => None,
    }
}

pub fn active_columns(measures: &[Measure]) -> Vec<&'static str> {
    let mut out = Vec::new();
    if measures.contains(&Measure::Gap) {
        out.extend(["gap_avg", "gap_last"]);
    }
    if measures.contains(&Measure::Wardrop) {
        out.push("wardrop");
    }
    if measures.contains(&Measure::GradNormSq) {
        out.push("grad_norm_sq");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub seed: u64,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub r_squared: Option<f64>,
    pub window: Option<(f64, f64)>,
    /// Why no fit was produced.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeritSummary {
    pub initial_mean: f64,
    pub final_mean: f64,
    /// Half-width of the 95% t-interval; absent for a single seed.
    pub final_ci_half_width: Option<f64>,
    pub final_per_seed: Vec<f64>,
    pub fits: Vec<FitSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub name: String,
    pub algorithm: String,
    pub iterations: usize,
    pub seeds: Vec<u64>,
    pub diverged_count: usize,
    /// Seeds that diverged or whose last-iterate gap did not decrease;
    /// absent when the gap is not measured.
    pub non_convergent_count: Option<usize>,
    pub final_eta_per_seed: Vec<f64>,
    pub merits: BTreeMap<String, MeritSummary>,
}

/// Mean and 95% confidence half-width with a Student t quantile on `n - 1`
/// degrees of freedom.
pub fn mean_and_half_width(values: &[f64]) -> (f64, Option<f64>) {
    let n = values.len();
    // shifted by the first value so constant data gives exact results
    let origin = values.first().copied().unwrap_or(f64::NAN);
    let shift = values.iter().map(|v| v - origin).sum::<f64>() / n as f64;
    let mean = origin + shift;
    if n < 2 {
        return (mean, None);
    }
    let var = values
        .iter()
        .map(|v| (v - origin - shift).powi(2))
        .sum::<f64>()
        / (n - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("degrees of freedom are positive")
        .inverse_cdf(0.975);
    (mean, Some(t * (var / n as f64).sqrt()))
}

fn merit_series(run: &SeedRun, column: &str) -> Vec<(f64, f64)> {
    run.merits
        .iter()
        .filter_map(|r| merit_value(r, column).map(|v| (r.n as f64, v)))
        .collect()
}

pub fn build_report(outcome: &ExperimentOutcome) -> RunReport {
    let config = &outcome.config;
    let mut merits = BTreeMap::new();
    for column in active_columns(&config.merit.measures) {
        let series: Vec<Vec<(f64, f64)>> = outcome
            .runs
            .iter()
            .map(|r| merit_series(r, column))
            .collect();
        let first = |s: &Vec<(f64, f64)>| s.first().map_or(f64::NAN, |p| p.1);
        let last = |s: &Vec<(f64, f64)>| s.last().map_or(f64::NAN, |p| p.1);
        let initial: Vec<f64> = series.iter().map(first).collect();
        let finals: Vec<f64> = series.iter().map(last).collect();
        let (final_mean, half) = mean_and_half_width(&finals);
        let fits = outcome
            .runs
            .iter()
            .zip(&series)
            .map(|(run, s)| match fit_rate(s, config.merit.window_fraction) {
                Ok(f) => FitSummary {
                    seed: run.seed,
                    slope: Some(f.slope),
                    intercept: Some(f.intercept),
                    r_squared: Some(f.r_squared),
                    window: Some(f.window),
                    error: None,
                },
                Err(e) => FitSummary {
                    seed: run.seed,
                    slope: None,
                    intercept: None,
                    r_squared: None,
                    window: None,
                    error: Some(e.to_string()),
                },
            })
            .collect();
        merits.insert(
            column.to_string(),
            MeritSummary {
                initial_mean: mean_and_half_width(&initial).0,
                final_mean,
                final_ci_half_width: half,
                final_per_seed: finals,
                fits,
            },
        );
    }
    let non_convergent_count = config.merit.measures.contains(&Measure::Gap).then(|| {
        outcome
            .runs
            .iter()
            .filter(|r| {
                let s = merit_series(r, "gap_last");
                r.trace.diverged
                    || match (s.first(), s.last()) {
                        (Some(a), Some(b)) => b.1 >= a.1,
                        _ => true,
                    }
            })
            .count()
    });
    RunReport {
        name: config.name.clone(),
        algorithm: config.algorithm.label(),
        iterations: config.iterations,
        seeds: config.seeds.clone(),
        diverged_count: outcome.runs.iter().filter(|r| r.trace.diverged).count(),
        non_convergent_count,
        final_eta_per_seed: outcome.runs.iter().filter_map(|r| r.final_eta()).collect(),
        merits,
    }
}
