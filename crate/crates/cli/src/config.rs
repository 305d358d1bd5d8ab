//! Experiment configuration: parsing, validation and construction of the
//! problem, oracle and algorithm it describes.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use adaprox::geometry::{BregmanKind, MetricKind, MirrorGeometry};
use adaprox::prelude::*;
use adaprox::problems::{
    make_bilinear_random_saddle, CovarianceGame, FieldKind, TransformConvention,
};
use anyhow::{bail, ensure, Context};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub iterations: usize,
    pub seeds: Vec<u64>,
    #[serde(default = "InitialPoint::default_preset")]
    pub initial_point: InitialPoint,
    pub problem: ProblemSpec,
    pub algorithm: AlgorithmSpec,
    #[serde(default)]
    pub noise: NoiseSpec,
    pub merit: MeritSpec,
    #[serde(default)]
    pub checkpoints: CheckpointSpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProblemSpec {
    Bilinear {
        dim: usize,
        #[serde(default = "default_radius")]
        box_radius: f64,
        /// Seed of the Gaussian matrix; ignored when `matrix` is given.
        #[serde(default)]
        matrix_seed: u64,
        /// Explicit row-major matrix.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<Vec<f64>>,
        /// Explicit saddle point; drawn from `matrix_seed` when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta_star: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi_star: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        saddle_amplitude: Option<f64>,
    },
    SignField {
        dim: usize,
        g_scale: f64,
        x_star: Vec<f64>,
        #[serde(default = "default_radius")]
        box_radius: f64,
    },
    ResourceAllocation {
        capacities: Vec<f64>,
        inflow: f64,
        #[serde(default)]
        lambda: f64,
        #[serde(default)]
        coordinates: Coordinates,
        #[serde(default)]
        convention: Convention,
    },
    Covariance {
        dim: usize,
        /// Explicit row-major covariance; drawn from `sigma_seed` when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sigma: Option<Vec<f64>>,
        #[serde(default)]
        sigma_seed: u64,
    },
}

fn default_radius() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coordinates {
    #[default]
    Loads,
    Transformed,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    #[default]
    Literal,
    JacobianConsistent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlgorithmSpec {
    EgConstant {
        eta: f64,
    },
    EgInvSqrt {
        c: f64,
    },
    EgAdaptive,
    Adaprox {
        #[serde(default)]
        metric: MetricName,
        #[serde(default)]
        bregman: BregmanName,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricName {
    #[default]
    Euclidean,
    InverseBox,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BregmanName {
    #[default]
    HalfSquaredEuclidean,
    InverseBarrier,
}

impl AlgorithmSpec {
    pub fn label(&self) -> String {
        match self {
            AlgorithmSpec::EgConstant { eta } => format!("eg-constant-{eta}"),
            AlgorithmSpec::EgInvSqrt { c } => format!("eg-inv-sqrt-{c}"),
            AlgorithmSpec::EgAdaptive => "eg-adaptive".into(),
            AlgorithmSpec::Adaprox { metric, bregman } => match (metric, bregman) {
                (MetricName::Euclidean, BregmanName::HalfSquaredEuclidean) => "adaprox".into(),
                _ => format!("adaprox-{metric:?}-{bregman:?}").to_lowercase(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialPoint {
    Preset(Preset),
    Values(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Domain center; `(V, W) = (I, 0)` for the covariance game.
    Center,
    UpperCorner,
    LowerCorner,
}

impl InitialPoint {
    fn default_preset() -> Self {
        InitialPoint::Preset(Preset::Center)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NoiseSpec {
    #[default]
    None,
    Gaussian {
        sigma: f64,
    },
    Minibatch {
        batch: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    /// Restricted gap of the ergodic average and of the last iterate.
    Gap,
    Wardrop,
    GradNormSq,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeritSpec {
    pub measures: Vec<Measure>,
    /// Merits are evaluated at every `cadence`-th checkpoint (and the last).
    #[serde(default = "one")]
    pub cadence: usize,
    #[serde(default)]
    pub test_domain: TestDomainSpec,
    #[serde(default = "default_samples")]
    pub gap_samples: usize,
    #[serde(default = "default_window")]
    pub window_fraction: f64,
}

fn one() -> usize {
    1
}

fn default_samples() -> usize {
    SearchBudget::default().samples
}

fn default_window() -> f64 {
    0.5
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TestDomainSpec {
    #[default]
    FullBox,
    /// Sup-norm ball around the known solution; default radius is a quarter
    /// of the smallest domain half-width.
    SolutionNeighborhood {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckpointSpec {
    pub dense_prefix: usize,
    pub per_decade: usize,
    pub uniform: usize,
}

impl Default for CheckpointSpec {
    fn default() -> Self {
        let s = CheckpointSchedule::default();
        CheckpointSpec {
            dense_prefix: s.dense_prefix,
            per_decade: s.per_decade,
            uniform: s.uniform,
        }
    }
}

impl From<CheckpointSpec> for CheckpointSchedule {
    fn from(s: CheckpointSpec) -> Self {
        CheckpointSchedule {
            dense_prefix: s.dense_prefix,
            per_decade: s.per_decade,
            uniform: s.uniform,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Relative paths resolve against the output root.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub algorithms: Vec<AlgorithmSpec>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        let config: ExperimentConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    /// Canonical text form; parsing it yields an equal config.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        ensure!(!self.name.trim().is_empty(), "name must not be empty");
        ensure!(
            self.iterations >= 1,
            "iterations must be at least 1, got {}",
            self.iterations
        );
        ensure!(!self.seeds.is_empty(), "seeds must not be empty");
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        ensure!(sorted.len() == self.seeds.len(), "seeds must be distinct");
        ensure!(
            !self.merit.measures.is_empty(),
            "merit.measures must not be empty"
        );
        ensure!(self.merit.cadence >= 1, "merit.cadence must be at least 1");
        ensure!(
            self.merit.gap_samples >= 1,
            "merit.gap_samples must be at least 1"
        );
        ensure!(
            self.merit.window_fraction > 0.0 && self.merit.window_fraction <= 1.0,
            "merit.window_fraction must lie in (0, 1]"
        );
        if let Some(sweep) = &self.sweep {
            ensure!(
                !sweep.algorithms.is_empty(),
                "sweep.algorithms must not be empty"
            );
            for a in &sweep.algorithms {
                self.check_algorithm(a)?;
            }
        }
        self.check_algorithm(&self.algorithm)?;
        let problem = self.build_problem()?;
        self.initial_point(&problem)?;
        self.check_merits(&problem)?;
        match (&self.noise, &problem.field) {
            (NoiseSpec::Minibatch { .. }, FieldKind::Covariance(_)) | (NoiseSpec::None, _) => {}
            (NoiseSpec::Gaussian { sigma }, _) => {
                ensure!(
                    *sigma >= 0.0 && sigma.is_finite(),
                    "noise.sigma must be non-negative"
                )
            }
            (NoiseSpec::Minibatch { .. }, _) => {
                bail!("minibatch noise is only defined for the covariance problem")
            }
        }
        // build once to surface geometry/domain incompatibilities
        self.build_algorithm(&self.algorithm, &problem)?;
        if let Some(sweep) = &self.sweep {
            for a in &sweep.algorithms {
                self.build_algorithm(a, &problem)?;
            }
        }
        Ok(())
    }

    fn check_algorithm(&self, a: &AlgorithmSpec) -> anyhow::Result<()> {
        match a {
            AlgorithmSpec::EgConstant { eta } => {
                ensure!(
                    *eta > 0.0 && eta.is_finite(),
                    "algorithm.eta must be positive"
                )
            }
            AlgorithmSpec::EgInvSqrt { c } => {
                ensure!(*c > 0.0 && c.is_finite(), "algorithm.c must be positive")
            }
            _ => {}
        }
        Ok(())
    }

    fn check_merits(&self, problem: &VIProblem) -> anyhow::Result<()> {
        for m in &self.merit.measures {
            match m {
                Measure::Gap => {
                    ensure!(
                        problem.domain.bounding_box().is_some(),
                        "the gap merit needs a bounded domain"
                    );
                    self.test_domain(problem)?;
                }
                Measure::Wardrop => ensure!(
                    problem.resource_params().is_some(),
                    "the wardrop merit needs a resource-allocation problem"
                ),
                Measure::GradNormSq => {}
            }
        }
        Ok(())
    }

    pub fn build_problem(&self) -> anyhow::Result<VIProblem> {
        Ok(match &self.problem {
            ProblemSpec::Bilinear {
                dim,
                box_radius,
                matrix_seed,
                matrix,
                theta_star,
                phi_star,
                saddle_amplitude,
            } => {
                let explicit = theta_star.is_some() || phi_star.is_some();
                ensure!(
                    !(explicit && saddle_amplitude.is_some()),
                    "give either theta_star/phi_star or saddle_amplitude, not both"
                );
                match (matrix, explicit) {
                    (_, true) => {
                        let theta = theta_star.clone().context("missing field `theta_star`")?;
                        let phi = phi_star.clone().context("missing field `phi_star`")?;
                        match matrix {
                            Some(m) => {
                                make_bilinear_with_matrix(*dim, m.clone(), theta, phi, *box_radius)?
                            }
                            None => make_bilinear(*dim, *matrix_seed, theta, phi, *box_radius)?,
                        }
                    }
                    (None, false) => make_bilinear_random_saddle(
                        *dim,
                        *matrix_seed,
                        saddle_amplitude.unwrap_or(0.0),
                        *box_radius,
                    )?,
                    (Some(_), false) => {
                        bail!("an explicit matrix needs explicit theta_star and phi_star")
                    }
                }
            }
            ProblemSpec::SignField {
                dim,
                g_scale,
                x_star,
                box_radius,
            } => make_sign_field(*dim, *g_scale, x_star.clone(), *box_radius)?,
            ProblemSpec::ResourceAllocation {
                capacities,
                inflow,
                lambda,
                coordinates,
                convention,
            } => {
                let loads = make_resource_allocation(capacities.clone(), *inflow, *lambda)?;
                match coordinates {
                    Coordinates::Loads => loads,
                    Coordinates::Transformed => {
                        let convention = match convention {
                            Convention::Literal => TransformConvention::Literal,
                            Convention::JacobianConsistent => {
                                TransformConvention::JacobianConsistent
                            }
                        };
                        adaprox::problems::to_transformed_coordinates_with(&loads, convention)?
                    }
                }
            }
            ProblemSpec::Covariance {
                dim,
                sigma,
                sigma_seed,
            } => {
                let sigma = match sigma {
                    Some(s) => s.clone(),
                    None => random_covariance(*dim, *sigma_seed),
                };
                covariance_problem(*dim, sigma)?
            }
        })
    }

    pub fn initial_point(&self, problem: &VIProblem) -> anyhow::Result<Vec<f64>> {
        let x = match &self.initial_point {
            InitialPoint::Values(v) => v.clone(),
            InitialPoint::Preset(preset) => {
                if let FieldKind::Covariance(game) = &problem.field {
                    ensure!(
                        *preset == Preset::Center,
                        "the covariance problem only supports the center preset"
                    );
                    game.default_start()
                } else {
                    match preset {
                        Preset::Center => problem.domain.center(),
                        Preset::UpperCorner | Preset::LowerCorner => {
                            let (lo, hi) = problem
                                .domain
                                .bounding_box()
                                .context("corner presets need a bounded domain")?;
                            ensure!(
                                problem.domain.is_closed(),
                                "corner presets need a box domain"
                            );
                            if *preset == Preset::UpperCorner {
                                hi
                            } else {
                                lo
                            }
                        }
                    }
                }
            }
        };
        ensure!(
            x.len() == problem.dim(),
            "initial point has {} coordinates, problem has {}",
            x.len(),
            problem.dim()
        );
        problem
            .domain
            .check_point(&x)
            .context("initial point is outside the domain")?;
        Ok(x)
    }

    pub fn test_domain(&self, problem: &VIProblem) -> anyhow::Result<TestDomain> {
        let budget = SearchBudget {
            samples: self.merit.gap_samples,
            ..SearchBudget::default()
        };
        let test = match &self.merit.test_domain {
            TestDomainSpec::FullBox => TestDomain::full_box(),
            TestDomainSpec::SolutionNeighborhood { radius } => {
                let around = TestDomain::around_solution(problem)?;
                match radius {
                    Some(r) => {
                        ensure!(*r > 0.0, "test_domain.radius must be positive");
                        let center = problem.known_solution.clone().expect("checked above");
                        TestDomain::neighborhood(center, *r)
                    }
                    None => around,
                }
            }
        };
        Ok(test.with_budget(budget))
    }

    pub fn build_algorithm(
        &self,
        spec: &AlgorithmSpec,
        problem: &VIProblem,
    ) -> anyhow::Result<Algorithm> {
        Ok(match spec {
            AlgorithmSpec::EgConstant { eta } => Algorithm::Extragradient(StepKind::Constant(*eta)),
            AlgorithmSpec::EgInvSqrt { c } => Algorithm::Extragradient(StepKind::InverseSqrt(*c)),
            AlgorithmSpec::EgAdaptive => Algorithm::Extragradient(StepKind::Adaptive),
            AlgorithmSpec::Adaprox { metric, bregman } => {
                let metric = match metric {
                    MetricName::Euclidean => MetricKind::Euclidean,
                    MetricName::InverseBox => MetricKind::InverseBox,
                };
                let bregman = match bregman {
                    BregmanName::HalfSquaredEuclidean => BregmanKind::HalfSquaredEuclidean,
                    BregmanName::InverseBarrier => BregmanKind::InverseBarrier,
                };
                Algorithm::AdaProx(MirrorGeometry::from_kinds(
                    metric,
                    bregman,
                    problem.domain.clone(),
                )?)
            }
        })
        .and_then(|a| {
            if matches!(a, Algorithm::Extragradient(_)) {
                ensure!(
                    problem.domain.is_closed(),
                    "extra-gradient needs a closed box or unconstrained domain"
                );
            }
            Ok(a)
        })
    }

    pub fn build_oracle(
        &self,
        problem: Arc<VIProblem>,
        seed: u64,
    ) -> anyhow::Result<StochasticOracle> {
        let noise = match &self.noise {
            NoiseSpec::None => NoiseModel::None,
            NoiseSpec::Gaussian { sigma } => NoiseModel::GaussianAdditive {
                sigma: vec![*sigma; problem.dim()],
            },
            NoiseSpec::Minibatch { batch } => NoiseModel::MinibatchCovariance { batch: *batch },
        };
        Ok(StochasticOracle::new(problem, noise, seed)?)
    }

    /// The configs a sweep compares: one per listed algorithm, or the config
    /// itself when there is no sweep section.
    pub fn sweep_variants(&self) -> Vec<ExperimentConfig> {
        match &self.sweep {
            None => vec![self.clone()],
            Some(s) => s
                .algorithms
                .iter()
                .map(|a| ExperimentConfig {
                    algorithm: a.clone(),
                    sweep: None,
                    ..self.clone()
                })
                .collect(),
        }
    }
}

/// `Sigma = A A^T / d + I / 10` with standard normal `A` drawn from `seed`.
fn random_covariance(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<f64> = (0..dim * dim)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let mut sigma = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let s: f64 = (0..dim).map(|k| a[i * dim + k] * a[j * dim + k]).sum();
            sigma[i * dim + j] = s / dim as f64 + if i == j { 0.1 } else { 0.0 };
        }
    }
    sigma
}

/// Covariance game parameters, if any.
pub fn covariance_game(problem: &VIProblem) -> Option<&CovarianceGame> {
    match &problem.field {
        FieldKind::Covariance(g) => Some(g),
        _ => None,
    }
}
