use super::{FieldKind, Regularity, VIProblem};
use crate::error::{check_dim, Error, Result};
use crate::geometry::DomainSpec;

/// `V(x)_i = g * sign(x_i - x*_i)` with `sign(0) = 0`: the subgradient field
/// of `g ||x - x*||_1`. Monotone, bounded and discontinuous.
#[derive(Debug, Clone, PartialEq)]
pub struct SignField {
    pub g_scale: f64,
    pub x_star: Vec<f64>,
}

impl SignField {
    pub(crate) fn eval(&self, x: &[f64], out: &mut [f64]) {
        for ((o, xi), si) in out.iter_mut().zip(x).zip(&self.x_star) {
            let diff = xi - si;
            *o = if diff > 0.0 {
                self.g_scale
            } else if diff < 0.0 {
                -self.g_scale
            } else {
                0.0
            };
        }
    }
}

pub fn make_sign_field(
    dim: usize,
    g_scale: f64,
    x_star: Vec<f64>,
    box_radius: f64,
) -> Result<VIProblem> {
    check_dim(dim, x_star.len())?;
    if !(g_scale > 0.0) {
        return Err(Error::InvalidConfiguration(format!(
            "sign-field scale must be positive, got {g_scale}"
        )));
    }
    let domain = DomainSpec::symmetric_box(dim, box_radius)?;
    if x_star.iter().any(|v| !(v.abs() < box_radius)) {
        return Err(Error::InvalidConfiguration(
            "sign-field solution must lie inside the box".into(),
        ));
    }
    let bound = g_scale * (dim as f64).sqrt();
    Ok(VIProblem {
        name: format!("sign-{dim}"),
        domain,
        field: FieldKind::Sign(SignField {
            g_scale,
            x_star: x_star.clone(),
        }),
        regularity: Regularity {
            is_monotone: true,
            metric_bound: Some(bound),
            metric_smoothness: None,
            euclidean_bound: Some(bound),
            euclidean_lipschitz: None,
        },
        known_solution: Some(x_star),
    })
}
