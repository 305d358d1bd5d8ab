use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepKind {
    /// `eta_n = eta`
    Constant(f64),
    /// `eta_n = c / sqrt(n)`
    InverseSqrt(f64),
    /// `eta_{n+1} = 1 / sqrt(1 + sum_{k <= n} delta_k^2)`, `eta_1 = 1`.
    Adaptive,
}

/// Step-size schedule together with the running sum of squared residuals.
///
/// The residual sum is tracked for every kind so traces are comparable; only
/// the adaptive kind feeds it back into the step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPolicy {
    pub kind: StepKind,
    sum_delta_sq: f64,
    current: f64,
    n: usize,
}

impl StepPolicy {
    pub fn new(kind: StepKind) -> Result<Self> {
        let current = match kind {
            StepKind::Constant(eta) | StepKind::InverseSqrt(eta) => {
                if !(eta > 0.0) || !eta.is_finite() {
                    return Err(Error::InvalidConfiguration(format!(
                        "step parameter must be positive and finite, got {eta}"
                    )));
                }
                eta
            }
            StepKind::Adaptive => 1.0,
        };
        Ok(StepPolicy {
            kind,
            sum_delta_sq: 0.0,
            current,
            n: 1,
        })
    }

    pub fn adaptive() -> Self {
        Self::new(StepKind::Adaptive).expect("adaptive policy has no parameters")
    }

    /// `eta_n` for the iteration about to run.
    pub fn current(&self) -> f64 {
        self.current
    }

    pub fn sum_delta_sq(&self) -> f64 {
        self.sum_delta_sq
    }

    /// Index `n` of the iteration about to run.
    pub fn iteration(&self) -> usize {
        self.n
    }

    /// Closes iteration `n` with residual `delta` and prepares `eta_{n+1}`.
    pub fn advance(&mut self, delta: f64) {
        self.sum_delta_sq += delta * delta;
        self.n += 1;
        self.current = match self.kind {
            StepKind::Constant(eta) => eta,
            StepKind::InverseSqrt(c) => c / (self.n as f64).sqrt(),
            StepKind::Adaptive => 1.0 / (1.0 + self.sum_delta_sq).sqrt(),
        };
    }
}
