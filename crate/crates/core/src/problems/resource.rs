use super::{FieldKind, Regularity, VIProblem};
use crate::error::{check_dim, Error, Result};
use crate::geometry::DomainSpec;

/// Parallel processors with Kleinrock M/M/1 latencies `1 / (c_r - l_r)`
/// serving a total inflow `R`, plus an activation charge `lambda` on every
/// node that carries load.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceAllocation {
    pub capacities: Vec<f64>,
    pub inflow: f64,
    pub lambda: f64,
}

/// How the activation charge is carried into transformed coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransformConvention {
    /// `V_r(x) = -1/x_r - lambda 1{x_r < 1}`.
    #[default]
    Literal,
    /// `V_r(x) = -1/x_r - lambda c_r 1{x_r < 1}`, the exact pullback of the load field.
    JacobianConsistent,
}

impl ResourceAllocation {
    pub fn dim(&self) -> usize {
        self.capacities.len()
    }

    /// Per-node cost `1/(c_r - l_r) + lambda 1{l_r > 0}` at a load profile.
    pub fn costs(&self, loads: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.eval_loads(loads, &mut out)?;
        Ok(out)
    }

    pub(crate) fn eval_loads(&self, loads: &[f64], out: &mut [f64]) -> Result<()> {
        check_dim(self.dim(), loads.len())?;
        for ((o, l), c) in out.iter_mut().zip(loads).zip(&self.capacities) {
            if !(*l < *c) {
                return Err(Error::InvalidPoint(format!(
                    "load {l} reaches capacity {c}"
                )));
            }
            *o = 1.0 / (c - l) + if *l > 0.0 { self.lambda } else { 0.0 };
        }
        Ok(())
    }

    pub(crate) fn eval_transformed(
        &self,
        convention: TransformConvention,
        x: &[f64],
        out: &mut [f64],
    ) -> Result<()> {
        check_dim(self.dim(), x.len())?;
        for ((o, xi), c) in out.iter_mut().zip(x).zip(&self.capacities) {
            if !(*xi > 0.0) {
                return Err(Error::InvalidPoint(format!(
                    "transformed coordinate {xi} must be positive"
                )));
            }
            let charge = match convention {
                TransformConvention::Literal => self.lambda,
                TransformConvention::JacobianConsistent => self.lambda * c,
            };
            *o = -1.0 / xi - if *xi < 1.0 { charge } else { 0.0 };
        }
        Ok(())
    }

    /// `x_r = 1 - l_r / c_r`
    pub fn to_transformed(&self, loads: &[f64]) -> Vec<f64> {
        loads
            .iter()
            .zip(&self.capacities)
            .map(|(l, c)| 1.0 - l / c)
            .collect()
    }

    /// `l_r = c_r (1 - x_r)`
    pub fn to_loads(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.capacities)
            .map(|(xi, c)| c * (1.0 - xi))
            .collect()
    }

    /// Wardrop equilibrium without activation charge: every loaded node has
    /// latency `1/u`, where `sum_r max(0, c_r - u) = R`.
    pub fn equilibrium_loads(&self) -> Option<Vec<f64>> {
        if self.lambda != 0.0 {
            return None;
        }
        let served = |u: f64| -> f64 { self.capacities.iter().map(|c| (c - u).max(0.0)).sum() };
        let mut lo = 0.0;
        let mut hi = self.capacities.iter().copied().fold(0.0, f64::max);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if served(mid) > self.inflow {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let u = 0.5 * (lo + hi);
        Some(self.capacities.iter().map(|c| (c - u).max(0.0)).collect())
    }
}

pub fn make_resource_allocation(
    capacities: Vec<f64>,
    inflow: f64,
    lambda: f64,
) -> Result<VIProblem> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidConfiguration(format!(
            "activation charge must be non-negative, got {lambda}"
        )));
    }
    let domain = DomainSpec::capacity_simplex(capacities.clone(), inflow)?;
    let d = capacities.len() as f64;
    let params = ResourceAllocation {
        capacities,
        inflow,
        lambda,
    };
    let known_solution = params.equilibrium_loads();
    Ok(VIProblem {
        name: format!("resource-{}", params.dim()),
        domain,
        field: FieldKind::ResourceLoads(params),
        // Bounds hold in transformed coordinates under the inverse-box metric.
        regularity: Regularity {
            is_monotone: true,
            metric_bound: Some(d * (1.0 + lambda)),
            metric_smoothness: (lambda == 0.0).then_some(d),
            euclidean_bound: None,
            euclidean_lipschitz: None,
        },
        known_solution,
    })
}

pub fn to_transformed_coordinates(problem: &VIProblem) -> Result<VIProblem> {
    to_transformed_coordinates_with(problem, TransformConvention::Literal)
}

pub fn to_transformed_coordinates_with(
    problem: &VIProblem,
    convention: TransformConvention,
) -> Result<VIProblem> {
    let params = match &problem.field {
        FieldKind::ResourceLoads(p) => p.clone(),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "{} is not a resource-allocation problem in load coordinates",
                problem.name
            )))
        }
    };
    let domain =
        DomainSpec::transformed_capacity_simplex(params.capacities.clone(), params.inflow)?;
    let d = params.dim() as f64;
    let bound = match convention {
        TransformConvention::Literal => d * (1.0 + params.lambda),
        TransformConvention::JacobianConsistent => {
            d + params.lambda * params.capacities.iter().sum::<f64>()
        }
    };
    let known_solution = problem
        .known_solution
        .as_ref()
        .map(|l| params.to_transformed(l));
    Ok(VIProblem {
        name: format!("{}-transformed", problem.name),
        domain,
        regularity: Regularity {
            is_monotone: true,
            metric_bound: Some(bound),
            metric_smoothness: (params.lambda == 0.0).then_some(d),
            euclidean_bound: None,
            euclidean_lipschitz: None,
        },
        field: FieldKind::ResourceTransformed { params, convention },
        known_solution,
    })
}
