use crate::error::{check_dim, Error, Result};
use crate::vecops;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    /// `||t||_x = ||t||_2` everywhere.
    Euclidean,
    /// `||t||_x = max_i |t_i| / x_i` on `(0, 1]^d`.
    InverseBox,
}

/// A point-dependent norm family together with its regularity constants.
///
/// `beta` bounds the distortion of dual norms between nearby points,
/// `||w||_{x',*} / ||w||_{x,*} <= 1 + beta (||x - x'||_x + ||x - x'||_{x'})`,
/// and `nu` is a global lower bound `||t||_x >= nu ||t||_2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinslerMetric {
    pub kind: MetricKind,
    pub beta: f64,
    pub nu: f64,
}

impl FinslerMetric {
    pub fn euclidean() -> Self {
        FinslerMetric {
            kind: MetricKind::Euclidean,
            beta: 0.0,
            nu: 1.0,
        }
    }

    /// The inverse-box metric on `(0, 1]^dim`. On that set
    /// `max_i |t_i| / x_i >= ||t||_inf >= ||t||_2 / sqrt(dim)`.
    pub fn inverse_box(dim: usize) -> Self {
        FinslerMetric {
            kind: MetricKind::InverseBox,
            beta: 1.0,
            nu: 1.0 / (dim.max(1) as f64).sqrt(),
        }
    }

    pub fn for_kind(kind: MetricKind, dim: usize) -> Self {
        match kind {
            MetricKind::Euclidean => Self::euclidean(),
            MetricKind::InverseBox => Self::inverse_box(dim),
        }
    }

    fn check_base(&self, x: &[f64], v: &[f64]) -> Result<()> {
        check_dim(x.len(), v.len())?;
        if self.kind == MetricKind::InverseBox {
            if let Some(xi) = x.iter().find(|xi| !(**xi > 0.0)) {
                return Err(Error::InvalidPoint(format!(
                    "inverse-box metric requires positive coordinates, got {xi}"
                )));
            }
        }
        Ok(())
    }

    /// `||t||_x`
    pub fn primal_norm(&self, x: &[f64], t: &[f64]) -> Result<f64> {
        self.check_base(x, t)?;
        Ok(match self.kind {
            MetricKind::Euclidean => vecops::norm2(t),
            MetricKind::InverseBox => t
                .iter()
                .zip(x)
                .map(|(ti, xi)| ti.abs() / xi)
                .fold(0.0, f64::max),
        })
    }

    /// `||w||_{x,*} = max { <w, t> : ||t||_x = 1 }`
    pub fn dual_norm(&self, x: &[f64], w: &[f64]) -> Result<f64> {
        self.check_base(x, w)?;
        Ok(match self.kind {
            MetricKind::Euclidean => vecops::norm2(w),
            MetricKind::InverseBox => w.iter().zip(x).map(|(wi, xi)| xi * wi.abs()).sum(),
        })
    }
}
