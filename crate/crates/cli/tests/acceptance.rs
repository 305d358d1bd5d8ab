//! Acceptance criteria, one PASS/FAIL line each. Runs sequentially so the
//! wall-clock budgets are not shared with other work.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use adaprox::prelude::*;
use adaprox::vecops::dist2;
use adaprox_cli::report::build_report;
use adaprox_cli::{run_experiment, ExperimentConfig, ExperimentOutcome, RunReport};
use common::suites;

fn config(name: &str) -> ExperimentConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name);
    ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{name}: {e:#}"))
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn run(config: &ExperimentConfig) -> (ExperimentOutcome, RunReport) {
    let outcome =
        run_experiment(config, workers()).unwrap_or_else(|e| panic!("{}: {e:#}", config.name));
    let report = build_report(&outcome);
    (outcome, report)
}

fn slope(report: &RunReport, merit: &str) -> f64 {
    report.merits[merit].fits[0].slope.unwrap_or(f64::NAN)
}

fn eta_at(outcome: &ExperimentOutcome, n: usize) -> f64 {
    let steps = &outcome.runs[0].trace.steps;
    steps.iter().find(|s| s.n == n).map_or(f64::NAN, |s| s.eta)
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn check(conditions: &[(bool, String)], elapsed: Duration, budget: Duration) -> Verdict {
    let mut parts: Vec<String> = conditions.iter().map(|(_, s)| s.clone()).collect();
    parts.push(format!(
        "runtime {:.2}s < {}s",
        elapsed.as_secs_f64(),
        budget.as_secs()
    ));
    Verdict {
        pass: conditions.iter().all(|(ok, _)| *ok) && elapsed < budget,
        detail: parts.join("; "),
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let (_, untuned) = run(&config("fig1_untuned.cfg"));
    let (_, tuned) = run(&config("fig1_tuned.cfg"));
    let non_convergent = untuned.non_convergent_count.unwrap_or(0);
    let gap = tuned.merits["gap_avg"].final_mean;
    let s = slope(&tuned, "gap_avg");
    check(
        &[
            (
                non_convergent == 1,
                format!(
                    "eta=1.04 non-convergent runs {non_convergent}/1 (diverged {})",
                    untuned.diverged_count
                ),
            ),
            (gap < 1e-2, format!("eta=0.5 gap {gap:.3e} < 1e-2")),
            (s <= -0.75, format!("slope {s:.3} <= -0.75")),
        ],
        start.elapsed(),
        Duration::from_secs(10),
    )
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let c = config("bilinear_smooth.cfg");
    let (outcome, report) = run(&c);
    let s = slope(&report, "gap_avg");
    let eta_t = eta_at(&outcome, c.iterations);
    let eta_half = eta_at(&outcome, c.iterations / 2);
    check(
        &[
            (
                (-1.25..=-0.75).contains(&s),
                format!("gap slope {s:.3} in [-1.25, -0.75]"),
            ),
            (eta_t > 0.05, format!("eta_T {eta_t:.4} > 0.05")),
            (
                (eta_t - eta_half).abs() <= 1e-3,
                format!("|eta_T - eta_T/2| {:.2e} <= 1e-3", (eta_t - eta_half).abs()),
            ),
        ],
        start.elapsed(),
        Duration::from_secs(60),
    )
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let c = config("sign_field.cfg");
    let (outcome, report) = run(&c);
    let s = slope(&report, "gap_avg");
    let scaled: Vec<f64> = outcome.runs[0]
        .trace
        .steps
        .iter()
        .filter(|st| st.n >= c.iterations / 2)
        .map(|st| st.eta * (st.n as f64).sqrt())
        .collect();
    let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    check(
        &[
            (
                (-0.65..=-0.35).contains(&s),
                format!("gap slope {s:.3} in [-0.65, -0.35]"),
            ),
            (
                !scaled.is_empty() && lo >= 0.2 && hi <= 5.0,
                format!("eta_n sqrt(n) in [{lo:.3}, {hi:.3}] within [0.2, 5]"),
            ),
        ],
        start.elapsed(),
        Duration::from_secs(60),
    )
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let c = config("resource_allocation.cfg");
    let problem = c.build_problem().unwrap();
    let Ok(Algorithm::AdaProx(geometry)) = c.build_algorithm(&c.algorithm, &problem) else {
        return Verdict {
            pass: false,
            detail: "config does not build an AdaProx geometry".into(),
        };
    };
    let (outcome, report) = run(&c);
    let g = 3.0;
    let beta = geometry.metric.beta;
    let k = geometry.bregman.strong_convexity;
    let bound = 2.0 * g + 4.0 * beta * g / k + 1e-7;
    let max_delta = outcome.runs[0]
        .trace
        .steps
        .iter()
        .map(|s| s.delta)
        .fold(0.0, f64::max);
    let wardrop = report.merits["wardrop"].final_mean;
    check(
        &[
            (
                problem.regularity.metric_bound == Some(g),
                format!("G {:?} = 3", problem.regularity.metric_bound),
            ),
            (wardrop < 1e-3, format!("Wardrop residual {wardrop:.3e} < 1e-3")),
            (
                max_delta <= bound,
                format!("max delta {max_delta:.4} <= 2G + 4 beta G / K = {bound:.4} (beta {beta}, K {k})"),
            ),
        ],
        start.elapsed(),
        Duration::from_secs(30),
    )
}

fn criterion_5() -> Verdict {
    let start = Instant::now();
    let c = config("bilinear_last_iterate.cfg");
    let (outcome, _) = run(&c);
    let problem = c.build_problem().unwrap();
    let x_star = problem
        .known_solution
        .clone()
        .expect("bilinear games know their solution");
    let checkpoints = &outcome.runs[0].trace.checkpoints;
    let dist_at = |n: usize| {
        checkpoints
            .iter()
            .find(|cp| cp.n == n)
            .map_or(f64::NAN, |cp| dist2(&cp.x, &x_star))
    };
    let (d_t, d_half) = (dist_at(c.iterations), dist_at(c.iterations / 2));
    check(
        &[
            (d_t <= 1e-3, format!("||X_T - x*|| {d_t:.3e} <= 1e-3")),
            (
                d_t <= d_half + 1e-8,
                format!("tail monotone: {d_t:.3e} <= {d_half:.3e} + 1e-8 at T/2"),
            ),
        ],
        start.elapsed(),
        Duration::from_secs(30),
    )
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let per_suite = 4 * suites::SAMPLES;
    let results = [
        ("three-point", suites::three_point_identity(), per_suite),
        ("prox-descent", suites::prox_descent(), per_suite),
        ("two-prox", suites::two_prox(), per_suite),
        ("energy", suites::energy_inequality(), per_suite),
        ("log lemma", suites::logarithmic_lemma(), 500),
        ("prox oracle", suites::prox_matches_oracle(), 50),
    ];
    let conditions: Vec<(bool, String)> = results
        .into_iter()
        .map(|(name, r, want)| match r {
            Ok(n) => (n == want, format!("{name} {n}/{want}")),
            Err(e) => (false, format!("{name} failed: {e}")),
        })
        .collect();
    check(&conditions, start.elapsed(), Duration::from_secs(30))
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let c = config("bilinear_noise_sweep.cfg");
    let variants = c.sweep_variants();
    let summaries: Vec<(String, f64, f64)> = variants
        .iter()
        .map(|v| {
            let (_, report) = run(v);
            let m = &report.merits["grad_norm_sq"];
            (
                report.algorithm.clone(),
                m.final_mean,
                m.final_ci_half_width.unwrap_or(f64::NAN),
            )
        })
        .collect();
    let find = |prefix: &str| summaries.iter().find(|s| s.0.starts_with(prefix)).cloned();
    let (Some(ada), Some(eg)) = (find("adaprox"), find("eg-inv-sqrt")) else {
        return Verdict {
            pass: false,
            detail: "sweep lacks adaprox or eg-inv-sqrt".into(),
        };
    };
    check(
        &[
            (c.seeds.len() == 20, format!("{} seeds", c.seeds.len())),
            (
                ada.1 < eg.1,
                format!(
                    "AdaProx {:.4} ± {:.4} vs {} {:.4} ± {:.4}",
                    ada.1, ada.2, eg.0, eg.1, eg.2
                ),
            ),
            (ada.1 + ada.2 < eg.1 - eg.2, "95% intervals disjoint".into()),
        ],
        start.elapsed(),
        Duration::from_secs(120),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 7] = [
        ("untuned EG fails, tuned EG converges", criterion_1),
        (
            "smooth-regime O(1/T) rate and step stabilization",
            criterion_2,
        ),
        (
            "non-smooth-regime O(1/sqrt T) rate and step decay",
            criterion_3,
        ),
        ("singular geometry on resource allocation", criterion_4),
        ("last-iterate convergence", criterion_5),
        ("inequality property suites", criterion_6),
        ("noisy bilinear: AdaProx beats tuned EG", criterion_7),
    ];
    let mut failed = 0;
    for (k, (title, f)) in criteria.iter().enumerate() {
        let v = f();
        failed += usize::from(!v.pass);
        println!(
            "{} criterion {}: {title}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            k + 1,
            v.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
