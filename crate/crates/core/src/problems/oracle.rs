use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{stream_id, FieldKind, VIProblem};
use crate::error::{Error, Result};
use crate::geometry::DomainSpec;

/// Source of (possibly noisy) vector-field signals for a solver.
pub trait Oracle {
    fn domain(&self) -> &DomainSpec;
    fn query(&mut self, x: &[f64]) -> Result<Vec<f64>>;
}

/// Exact field evaluations.
impl Oracle for &VIProblem {
    fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    fn query(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        self.field(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseModel {
    None,
    /// Independent centered Gaussian perturbation with per-coordinate deviation.
    GaussianAdditive {
        sigma: Vec<f64>,
    },
    /// Fresh minibatches of real and latent samples for the covariance game.
    MinibatchCovariance {
        batch: usize,
    },
}

/// A problem plus a noise model and its own random stream.
///
/// The stream is derived from `(seed, problem name)`, so two oracles built
/// from the same problem and seed replay identical signals.
#[derive(Debug, Clone)]
pub struct StochasticOracle {
    pub base: Arc<VIProblem>,
    pub noise: NoiseModel,
    pub seed: u64,
    rng: ChaCha8Rng,
}

impl StochasticOracle {
    pub fn new(base: impl Into<Arc<VIProblem>>, noise: NoiseModel, seed: u64) -> Result<Self> {
        let base = base.into();
        match &noise {
            NoiseModel::None => {}
            NoiseModel::GaussianAdditive { sigma } => {
                if sigma.len() != base.dim() {
                    return Err(Error::InvalidConfiguration(format!(
                        "noise deviation has {} entries for a {}-dimensional field",
                        sigma.len(),
                        base.dim()
                    )));
                }
                if sigma.iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
                    return Err(Error::InvalidConfiguration(
                        "noise deviations must be finite and non-negative".into(),
                    ));
                }
            }
            NoiseModel::MinibatchCovariance { batch } => {
                if *batch == 0 {
                    return Err(Error::InvalidConfiguration(
                        "batch size must be positive".into(),
                    ));
                }
                if !matches!(base.field, FieldKind::Covariance(_)) {
                    return Err(Error::InvalidConfiguration(
                        "minibatch noise applies only to the covariance game".into(),
                    ));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id(&base.name));
        Ok(StochasticOracle {
            base,
            noise,
            seed,
            rng,
        })
    }

    pub fn deterministic(base: impl Into<Arc<VIProblem>>) -> Self {
        Self::new(base, NoiseModel::None, 0).expect("noise-free oracle is always valid")
    }

    pub fn gaussian(base: impl Into<Arc<VIProblem>>, sigma: f64, seed: u64) -> Result<Self> {
        let base = base.into();
        let dim = base.dim();
        Self::new(
            base,
            NoiseModel::GaussianAdditive {
                sigma: vec![sigma; dim],
            },
            seed,
        )
    }

    pub fn problem(&self) -> &VIProblem {
        &self.base
    }

    /// `V(x)` plus one draw of the configured noise.
    pub fn evaluate(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        match &self.noise {
            NoiseModel::None => self.base.field(x),
            NoiseModel::GaussianAdditive { sigma } => {
                let mut v = self.base.field(x)?;
                for (vi, s) in v.iter_mut().zip(sigma) {
                    let z: f64 = StandardNormal.sample(&mut self.rng);
                    *vi += s * z;
                }
                Ok(v)
            }
            NoiseModel::MinibatchCovariance { batch } => {
                let game = match &self.base.field {
                    FieldKind::Covariance(g) => g,
                    _ => unreachable!("validated at construction"),
                };
                self.base.domain.check_point(x)?;
                let d = game.dim;
                let m = *batch;
                let mut data_moment = vec![0.0; d * d];
                let mut noise_moment = vec![0.0; d * d];
                let mut z = vec![0.0; d];
                let mut sample = vec![0.0; d];
                for _ in 0..m {
                    // real data x = L z'
                    for zi in z.iter_mut() {
                        *zi = StandardNormal.sample(&mut self.rng);
                    }
                    for i in 0..d {
                        sample[i] = (0..=i).map(|k| game.chol[i * d + k] * z[k]).sum();
                    }
                    accumulate_outer(&mut data_moment, &sample);
                    // latent draw
                    for zi in z.iter_mut() {
                        *zi = StandardNormal.sample(&mut self.rng);
                    }
                    accumulate_outer(&mut noise_moment, &z);
                }
                let inv = 1.0 / m as f64;
                data_moment.iter_mut().for_each(|v| *v *= inv);
                noise_moment.iter_mut().for_each(|v| *v *= inv);
                let mut out = vec![0.0; self.base.dim()];
                game.eval_minibatch(x, &data_moment, &noise_moment, &mut out);
                Ok(out)
            }
        }
    }
}

fn accumulate_outer(acc: &mut [f64], v: &[f64]) {
    let d = v.len();
    for i in 0..d {
        for j in 0..d {
            acc[i * d + j] += v[i] * v[j];
        }
    }
}

impl Oracle for StochasticOracle {
    fn domain(&self) -> &DomainSpec {
        &self.base.domain
    }

    fn query(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        self.evaluate(x)
    }
}
