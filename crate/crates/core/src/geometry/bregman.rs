use super::domain::{DomainKind, DomainSpec};
use crate::error::{check_dim, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BregmanKind {
    /// `h(x) = ||x||^2 / 2`, paired with Euclidean projections.
    HalfSquaredEuclidean,
    /// `h(x) = sum_i 1 / x_i` on `(0, 1]^d`.
    InverseBarrier,
}

/// Tolerance on the constraint residual of the capacity-simplex prox.
pub const CAPACITY_PROX_TOL: f64 = 1e-10;
pub const CAPACITY_PROX_MAX_ITER: usize = 200;

/// A regularizer `h` with its gradient, divergence and prox-mapping on a domain.
///
/// `strong_convexity` is the modulus `K` in
/// `h(x') >= h(x) + <grad h(x), x' - x> + K/2 ||x' - x||_x^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BregmanFunction {
    pub kind: BregmanKind,
    pub strong_convexity: f64,
    domain: DomainSpec,
}

impl BregmanFunction {
    pub fn new(kind: BregmanKind, domain: DomainSpec) -> Result<Self> {
        let compatible = match kind {
            BregmanKind::HalfSquaredEuclidean => true,
            BregmanKind::InverseBarrier => matches!(
                domain.kind(),
                DomainKind::OpenUnitBoxUpperClosed | DomainKind::TransformedCapacitySimplex { .. }
            ),
        };
        if !compatible {
            return Err(Error::InvalidConfiguration(format!(
                "{kind:?} is not defined on {:?}",
                domain.kind()
            )));
        }
        // D(x', x) >= ||x' - x||_x^2 for the barrier, i.e. K/2 = 1.
        let strong_convexity = match kind {
            BregmanKind::HalfSquaredEuclidean => 1.0,
            BregmanKind::InverseBarrier => 2.0,
        };
        Ok(BregmanFunction {
            kind,
            strong_convexity,
            domain,
        })
    }

    pub fn half_squared_euclidean(domain: DomainSpec) -> Result<Self> {
        Self::new(BregmanKind::HalfSquaredEuclidean, domain)
    }

    pub fn inverse_barrier(domain: DomainSpec) -> Result<Self> {
        Self::new(BregmanKind::InverseBarrier, domain)
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    fn check_arg(&self, x: &[f64]) -> Result<()> {
        check_dim(self.domain.dim(), x.len())?;
        if self.kind == BregmanKind::InverseBarrier {
            if let Some(v) = x.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
                return Err(Error::InvalidPoint(format!(
                    "inverse barrier requires positive coordinates, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_arg(x)?;
        Ok(match self.kind {
            BregmanKind::HalfSquaredEuclidean => 0.5 * x.iter().map(|v| v * v).sum::<f64>(),
            BregmanKind::InverseBarrier => x.iter().map(|v| 1.0 / v).sum(),
        })
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_arg(x)?;
        Ok(match self.kind {
            BregmanKind::HalfSquaredEuclidean => x.to_vec(),
            BregmanKind::InverseBarrier => x.iter().map(|v| -1.0 / (v * v)).collect(),
        })
    }

    /// `D(x_to, x_from) = h(x_to) - h(x_from) - <grad h(x_from), x_to - x_from>`,
    /// evaluated through the cancellation-free closed forms.
    pub fn divergence(&self, x_to: &[f64], x_from: &[f64]) -> Result<f64> {
        self.check_arg(x_to)?;
        self.check_arg(x_from)?;
        Ok(match self.kind {
            BregmanKind::HalfSquaredEuclidean => {
                0.5 * x_to
                    .iter()
                    .zip(x_from)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
            }
            BregmanKind::InverseBarrier => x_to
                .iter()
                .zip(x_from)
                .map(|(a, b)| (a - b) * (a - b) / (b * b * a))
                .sum(),
        })
    }

    /// `prox_x(y) = argmin_{x' in domain} <y, x - x'> + D(x', x)`.
    pub fn prox(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_arg(x)?;
        check_dim(x.len(), y.len())?;
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(
                "prox direction is not finite".into(),
            ));
        }
        match self.kind {
            BregmanKind::HalfSquaredEuclidean => {
                let shifted: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
                self.domain.project(&shifted)
            }
            BregmanKind::InverseBarrier => {
                self.domain.check_point(x)?;
                // Stationarity: 1/x'^2 = 1/x^2 - y (+ mu c for the simplex).
                let base: Vec<f64> = x.iter().zip(y).map(|(a, b)| 1.0 / (a * a) - b).collect();
                match self.domain.kind() {
                    DomainKind::OpenUnitBoxUpperClosed => {
                        Ok(base.iter().map(|s| barrier_coordinate(*s)).collect())
                    }
                    DomainKind::TransformedCapacitySimplex { capacities, inflow } => {
                        barrier_capacity_prox(&base, capacities, *inflow)
                    }
                    _ => unreachable!("checked in constructor"),
                }
            }
        }
    }
}

/// Minimizer of the one-dimensional barrier prox objective on `(0, 1]` given
/// the stationarity value `s = 1/x'^2`; the upper face is active when `s <= 1`.
#[inline]
fn barrier_coordinate(s: f64) -> f64 {
    if s > 1.0 {
        1.0 / s.sqrt()
    } else {
        1.0
    }
}

fn barrier_capacity_prox(base: &[f64], capacities: &[f64], inflow: f64) -> Result<Vec<f64>> {
    let point = |mu: f64| -> Vec<f64> {
        base.iter()
            .zip(capacities)
            .map(|(s, c)| barrier_coordinate(s + mu * c))
            .collect()
    };
    // Served load, increasing in mu.
    let residual = |z: &[f64]| -> f64 {
        z.iter()
            .zip(capacities)
            .map(|(v, c)| c * (1.0 - v))
            .sum::<f64>()
            - inflow
    };

    let mut lo = -1.0_f64;
    let mut hi = 1.0_f64;
    let mut expansions = 0usize;
    while residual(&point(lo)) > 0.0 {
        lo *= 2.0;
        expansions += 1;
        if expansions > CAPACITY_PROX_MAX_ITER {
            return Err(Error::NumericalFailure {
                routine: "capacity prox bracket",
                residual: residual(&point(lo)),
                iterations: expansions,
            });
        }
    }
    while residual(&point(hi)) < 0.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > 2 * CAPACITY_PROX_MAX_ITER {
            return Err(Error::NumericalFailure {
                routine: "capacity prox bracket",
                residual: residual(&point(hi)),
                iterations: expansions,
            });
        }
    }

    let mut best = point(hi);
    let mut best_res = residual(&best);
    for _ in 0..CAPACITY_PROX_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let z = point(mid);
        let r = residual(&z);
        if r.abs() < best_res.abs() {
            best = z;
            best_res = r;
        }
        if best_res.abs() <= CAPACITY_PROX_TOL {
            return Ok(best);
        }
        if mid <= lo || mid >= hi {
            break;
        }
        if r > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NumericalFailure {
        routine: "capacity prox",
        residual: best_res,
        iterations: CAPACITY_PROX_MAX_ITER,
    })
}
