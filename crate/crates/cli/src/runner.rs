//! Executes an experiment: one solver run per seed, merits at checkpoints.

use std::sync::Arc;

use adaprox::merit::{grad_norm_sq, restricted_gap, wardrop_residual};
use adaprox::prelude::*;
use anyhow::Context;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, Measure};

/// Merit values at one checkpoint; `None` for measures not requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeritRow {
    pub n: usize,
    pub gap_avg: Option<f64>,
    pub gap_last: Option<f64>,
    pub wardrop: Option<f64>,
    pub grad_norm_sq: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SeedRun {
    pub seed: u64,
    pub trace: Trace,
    pub merits: Vec<MeritRow>,
}

impl SeedRun {
    pub fn final_eta(&self) -> Option<f64> {
        self.trace.steps.last().map(|s| s.eta)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub config: ExperimentConfig,
    /// In seed order.
    pub runs: Vec<SeedRun>,
}

/// Runs every seed of `config` on at most `workers` threads.
pub fn run_experiment(
    config: &ExperimentConfig,
    workers: usize,
) -> anyhow::Result<ExperimentOutcome> {
    let problem = Arc::new(config.build_problem()?);
    let algorithm = config.build_algorithm(&config.algorithm, &problem)?;
    let x1 = config.initial_point(&problem)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .context("starting worker pool")?;
    let runs = pool.install(|| {
        config
            .seeds
            .par_iter()
            .map(|&seed| run_seed(config, &problem, &algorithm, &x1, seed))
            .collect::<anyhow::Result<Vec<_>>>()
    })?;
    Ok(ExperimentOutcome {
        config: config.clone(),
        runs,
    })
}

pub fn run_seed(
    config: &ExperimentConfig,
    problem: &Arc<VIProblem>,
    algorithm: &Algorithm,
    x1: &[f64],
    seed: u64,
) -> anyhow::Result<SeedRun> {
    let mut oracle = config.build_oracle(problem.clone(), seed)?;
    let trace = run(
        &mut oracle,
        algorithm,
        x1.to_vec(),
        config.iterations,
        config.checkpoints.into(),
    )
    .with_context(|| format!("seed {seed}"))?;
    let merits =
        evaluate_merits(config, problem, &trace).with_context(|| format!("seed {seed}"))?;
    log::info!(
        "{} seed {seed}: {} iterations{}",
        config.name,
        trace.steps.len(),
        if trace.diverged { ", diverged" } else { "" }
    );
    Ok(SeedRun {
        seed,
        trace,
        merits,
    })
}

fn evaluate_merits(
    config: &ExperimentConfig,
    problem: &VIProblem,
    trace: &Trace,
) -> anyhow::Result<Vec<MeritRow>> {
    let wants = |m: Measure| config.merit.measures.contains(&m);
    let test = if wants(Measure::Gap) {
        Some(config.test_domain(problem)?)
    } else {
        None
    };
    let last = trace.checkpoints.len().saturating_sub(1);
    trace
        .checkpoints
        .iter()
        .enumerate()
        .filter(|(k, _)| k % config.merit.cadence == 0 || *k == last)
        .map(|(_, cp)| {
            let mut row = MeritRow {
                n: cp.n,
                gap_avg: None,
                gap_last: None,
                wardrop: None,
                grad_norm_sq: None,
            };
            if let Some(test) = &test {
                row.gap_avg = Some(restricted_gap(problem, test, &cp.average)?);
                row.gap_last = Some(restricted_gap(problem, test, &cp.x)?);
            }
            if wants(Measure::Wardrop) {
                let params = problem.resource_params().expect("validated");
                let loads = match &problem.field {
                    adaprox::problems::FieldKind::ResourceTransformed { .. } => {
                        params.to_loads(&cp.average)
                    }
                    _ => cp.average.clone(),
                };
                row.wardrop = Some(wardrop_residual(problem, &loads)?);
            }
            if wants(Measure::GradNormSq) {
                row.grad_norm_sq = Some(grad_norm_sq(problem, &cp.average)?);
            }
            Ok(row)
        })
        .collect()
}
