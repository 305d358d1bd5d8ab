use super::step::StepPolicy;
use crate::error::{check_dim, Error, Result};
use crate::geometry::{DomainSpec, MirrorGeometry};
use crate::problems::Oracle;
use crate::vecops;

/// Iterates beyond this Euclidean norm are treated as divergent.
pub const DIVERGENCE_NORM: f64 = 1e8;

/// Iteration state: current and leading iterates, step policy, and the
/// accumulators of the step-weighted average of leading iterates.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    /// `X_n`
    pub x: Vec<f64>,
    /// `X_{n+1/2}` of the last completed iteration (equal to `x` before the first).
    pub x_lead: Vec<f64>,
    /// Number of completed iterations.
    pub n: usize,
    pub avg_num: Vec<f64>,
    pub avg_den: f64,
    pub policy: StepPolicy,
}

impl SolverState {
    pub fn new(x1: Vec<f64>, policy: StepPolicy) -> Self {
        let dim = x1.len();
        SolverState {
            x_lead: x1.clone(),
            x: x1,
            n: 0,
            avg_num: vec![0.0; dim],
            avg_den: 0.0,
            policy,
        }
    }

    /// `sum eta_k X_{k+1/2} / sum eta_k`, or the current iterate before any step.
    pub fn ergodic_average(&self) -> Vec<f64> {
        if self.avg_den > 0.0 {
            self.avg_num.iter().map(|v| v / self.avg_den).collect()
        } else {
            self.x.clone()
        }
    }
}

/// What happened during one extra-gradient iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    /// Index of the completed iteration.
    pub n: usize,
    pub eta: f64,
    pub delta: f64,
    /// `X_n`
    pub x_prev: Vec<f64>,
    /// `V`-signal at `X_n`
    pub signal: Vec<f64>,
    /// `V`-signal at `X_{n+1/2}`
    pub signal_lead: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome {
    Advanced(StepReport),
    /// A non-finite signal or iterate, or an iterate norm above [`DIVERGENCE_NORM`].
    /// The state is left at the last finite iterate.
    Diverged {
        n: usize,
        eta: f64,
        delta: f64,
    },
}

fn escaped(x: &[f64]) -> bool {
    !vecops::all_finite(x) || vecops::norm2(x) > DIVERGENCE_NORM
}

/// One extra-gradient iteration with a generic mirror step and residual norm.
fn extragradient_iteration<O, M, N>(
    state: &mut SolverState,
    oracle: &mut O,
    mirror: M,
    dual_norm: N,
) -> Result<StepOutcome>
where
    O: Oracle + ?Sized,
    M: Fn(&[f64], &[f64]) -> Result<Vec<f64>>,
    N: Fn(&[f64], &[f64]) -> Result<f64>,
{
    check_dim(oracle.domain().dim(), state.x.len())?;
    let n = state.n + 1;
    let eta = state.policy.current();
    let diverged = |delta: f64| Ok(StepOutcome::Diverged { n, eta, delta });

    let signal = oracle.query(&state.x)?;
    if !vecops::all_finite(&signal) {
        return diverged(f64::NAN);
    }
    let x_lead = mirror(&state.x, &vecops::scaled(&signal, -eta))?;
    if escaped(&x_lead) {
        return diverged(f64::NAN);
    }
    let signal_lead = oracle.query(&x_lead)?;
    if !vecops::all_finite(&signal_lead) {
        return diverged(f64::NAN);
    }
    let x_next = mirror(&state.x, &vecops::scaled(&signal_lead, -eta))?;
    let delta = dual_norm(&x_lead, &vecops::sub(&signal_lead, &signal))?;
    if escaped(&x_next) || !delta.is_finite() {
        return diverged(delta);
    }

    for (acc, v) in state.avg_num.iter_mut().zip(&x_lead) {
        *acc += eta * v;
    }
    state.avg_den += eta;
    state.policy.advance(delta);
    let x_prev = std::mem::replace(&mut state.x, x_next);
    state.x_lead = x_lead;
    state.n = n;
    Ok(StepOutcome::Advanced(StepReport {
        n,
        eta,
        delta,
        x_prev,
        signal,
        signal_lead,
    }))
}

/// Projected extra-gradient step:
/// `X_{n+1/2} = P(X_n - eta_n g_n)`, `X_{n+1} = P(X_n - eta_n g_{n+1/2})`, with
/// `delta_n = ||g_{n+1/2} - g_n||_2`.
pub fn eg_step<O: Oracle + ?Sized>(
    state: &mut SolverState,
    oracle: &mut O,
    domain: &DomainSpec,
) -> Result<StepOutcome> {
    extragradient_iteration(
        state,
        oracle,
        |x, y| {
            let shifted: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
            domain.project(&shifted)
        },
        |_, w| Ok(vecops::norm2(w)),
    )
}

/// Mirror-prox step in a Finsler geometry:
/// `X_{n+1/2} = prox_{X_n}(-eta_n g_n)`, `X_{n+1} = prox_{X_n}(-eta_n g_{n+1/2})`,
/// with `delta_n = ||g_{n+1/2} - g_n||_{X_{n+1/2},*}`.
pub fn adaprox_step<O: Oracle + ?Sized>(
    state: &mut SolverState,
    oracle: &mut O,
    geometry: &MirrorGeometry,
) -> Result<StepOutcome> {
    if geometry.domain().dim() != oracle.domain().dim() {
        return Err(Error::DimensionMismatch {
            expected: oracle.domain().dim(),
            got: geometry.domain().dim(),
        });
    }
    extragradient_iteration(
        state,
        oracle,
        |x, y| geometry.bregman.prox(x, y),
        |x, w| geometry.metric.dual_norm(x, w),
    )
}
