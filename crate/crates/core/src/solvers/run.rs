use super::state::{adaprox_step, eg_step, SolverState, StepOutcome};
use super::step::{StepKind, StepPolicy};
use crate::error::{Error, Result};
use crate::geometry::MirrorGeometry;
use crate::problems::Oracle;

#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm {
    /// Euclidean extra-gradient with projections onto the oracle's domain.
    Extragradient(StepKind),
    /// Adaptive mirror-prox in the given geometry.
    AdaProx(MirrorGeometry),
}

impl Algorithm {
    pub fn initial_policy(&self) -> Result<StepPolicy> {
        match self {
            Algorithm::Extragradient(kind) => StepPolicy::new(*kind),
            Algorithm::AdaProx(_) => Ok(StepPolicy::adaptive()),
        }
    }

    pub fn step<O: Oracle + ?Sized>(
        &self,
        state: &mut SolverState,
        oracle: &mut O,
    ) -> Result<StepOutcome> {
        match self {
            Algorithm::Extragradient(_) => {
                let domain = oracle.domain().clone();
                eg_step(state, oracle, &domain)
            }
            Algorithm::AdaProx(geometry) => adaprox_step(state, oracle, geometry),
        }
    }
}

/// Iterations whose full state is stored: every iteration up to `dense_prefix`,
/// `per_decade` log-spaced iterations per power of ten, `uniform` evenly
/// spaced iterations across the horizon, and the last one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckpointSchedule {
    pub dense_prefix: usize,
    pub per_decade: usize,
    pub uniform: usize,
}

impl Default for CheckpointSchedule {
    fn default() -> Self {
        CheckpointSchedule {
            dense_prefix: 100,
            per_decade: 20,
            uniform: 100,
        }
    }
}

impl CheckpointSchedule {
    pub fn iterations(&self, horizon: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (1..=self.dense_prefix.min(horizon)).collect();
        if self.per_decade > 0 {
            let mut k = 0usize;
            loop {
                let n = 10f64.powf(k as f64 / self.per_decade as f64).round() as usize;
                if n > horizon {
                    break;
                }
                if n > self.dense_prefix {
                    out.push(n);
                }
                k += 1;
            }
        }
        if self.uniform > 0 && horizon >= self.uniform {
            out.extend((1..=self.uniform).map(|k| k * horizon / self.uniform));
        }
        if horizon > 0 {
            out.push(horizon);
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub n: usize,
    pub eta: f64,
    pub delta: f64,
    pub sum_delta_sq: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub n: usize,
    /// `X_n`
    pub x: Vec<f64>,
    /// `X_{n+1/2}`
    pub x_lead: Vec<f64>,
    /// Ergodic average after iteration `n`.
    pub average: Vec<f64>,
}

/// Per-iteration scalars plus thinned iterate checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub steps: Vec<StepRecord>,
    pub checkpoints: Vec<Checkpoint>,
    pub diverged: bool,
    pub final_state: SolverState,
}

impl Trace {
    pub fn last_checkpoint(&self) -> Option<&Checkpoint> {
        self.checkpoints.last()
    }

    pub fn etas(&self) -> impl Iterator<Item = f64> + '_ {
        self.steps.iter().map(|s| s.eta)
    }
}

/// Runs `iterations` steps of `algorithm` from `x1`. Divergence truncates the
/// run and sets [`Trace::diverged`] instead of returning an error.
pub fn run<O: Oracle + ?Sized>(
    oracle: &mut O,
    algorithm: &Algorithm,
    x1: Vec<f64>,
    iterations: usize,
    schedule: CheckpointSchedule,
) -> Result<Trace> {
    if iterations == 0 {
        return Err(Error::InvalidArgument(
            "iteration count must be at least 1".into(),
        ));
    }
    oracle.domain().check_point(&x1)?;
    let mut state = SolverState::new(x1, algorithm.initial_policy()?);
    let marks = schedule.iterations(iterations);
    let mut next_mark = marks.iter().copied().peekable();

    let mut steps = Vec::with_capacity(iterations);
    let mut checkpoints = Vec::with_capacity(marks.len());
    let mut diverged = false;
    for _ in 0..iterations {
        match algorithm.step(&mut state, oracle)? {
            StepOutcome::Advanced(report) => {
                steps.push(StepRecord {
                    n: report.n,
                    eta: report.eta,
                    delta: report.delta,
                    sum_delta_sq: state.policy.sum_delta_sq(),
                });
                if next_mark.peek() == Some(&report.n) {
                    next_mark.next();
                    checkpoints.push(Checkpoint {
                        n: report.n,
                        x: report.x_prev,
                        x_lead: state.x_lead.clone(),
                        average: state.ergodic_average(),
                    });
                }
            }
            StepOutcome::Diverged { n, eta, delta } => {
                log::debug!("run diverged at iteration {n}");
                steps.push(StepRecord {
                    n,
                    eta,
                    delta,
                    sum_delta_sq: f64::NAN,
                });
                diverged = true;
                break;
            }
        }
    }
    Ok(Trace {
        steps,
        checkpoints,
        diverged,
        final_state: state,
    })
}
