use crate::error::{Error, Result};
use crate::problems::VIProblem;

/// Nodes with `l_r > LOADED_FRACTION * c_r` count as loaded.
pub const LOADED_FRACTION: f64 = 1e-9;

/// `max_{r loaded} cost_r(l) - min_r cost_r(l)`, which vanishes exactly at
/// Wardrop equilibria. `loads` are in load coordinates for either version of
/// a resource-allocation problem.
pub fn wardrop_residual(problem: &VIProblem, loads: &[f64]) -> Result<f64> {
    let params = problem.resource_params().ok_or_else(|| {
        Error::InvalidArgument(format!(
            "{} is not a resource-allocation problem",
            problem.name
        ))
    })?;
    crate::error::check_dim(params.dim(), loads.len())?;
    let total: f64 = loads.iter().sum();
    let feasible = loads
        .iter()
        .zip(&params.capacities)
        .all(|(l, c)| *l >= -1e-12 && *l < *c)
        && (total - params.inflow).abs() <= 1e-8 * params.inflow.max(1.0);
    if !feasible {
        return Err(Error::InvalidPoint(format!(
            "load profile {loads:?} is not feasible"
        )));
    }
    let costs = params.costs(loads)?;
    let min_cost = costs.iter().copied().fold(f64::INFINITY, f64::min);
    let max_loaded = costs
        .iter()
        .zip(loads.iter().zip(&params.capacities))
        .filter(|(_, (l, c))| **l > LOADED_FRACTION * **c)
        .map(|(cost, _)| *cost)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(if max_loaded.is_finite() {
        (max_loaded - min_cost).max(0.0)
    } else {
        0.0
    })
}
