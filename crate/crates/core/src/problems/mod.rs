//! Variational-inequality instances and the oracles that sample their fields.

mod bilinear;
mod covariance;
mod oracle;
mod resource;
mod sign;

use std::fmt;
use std::sync::Arc;

pub use bilinear::{
    make_bilinear, make_bilinear_random_saddle, make_bilinear_with_matrix, BilinearGame,
};
pub use covariance::{covariance_problem, make_covariance_game, CovarianceGame};
pub use oracle::{NoiseModel, Oracle, StochasticOracle};
pub use resource::{
    make_resource_allocation, to_transformed_coordinates, to_transformed_coordinates_with,
    ResourceAllocation, TransformConvention,
};
pub use sign::{make_sign_field, SignField};

use crate::error::{check_dim, Result};
use crate::geometry::DomainSpec;
use crate::vecops;

/// Regularity constants known for a problem. `metric_*` refer to the local
/// norms of the geometry the problem is meant to be solved in.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Regularity {
    pub is_monotone: bool,
    pub metric_bound: Option<f64>,
    pub metric_smoothness: Option<f64>,
    pub euclidean_bound: Option<f64>,
    pub euclidean_lipschitz: Option<f64>,
}

pub type CustomField = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;

#[derive(Clone)]
pub enum FieldKind {
    Bilinear(BilinearGame),
    Sign(SignField),
    /// Latencies in load coordinates.
    ResourceLoads(ResourceAllocation),
    /// Latencies after `x_r = 1 - l_r / c_r`.
    ResourceTransformed {
        params: ResourceAllocation,
        convention: TransformConvention,
    },
    Covariance(CovarianceGame),
    Custom(CustomField),
}

impl fmt::Debug for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Bilinear(g) => f.debug_tuple("Bilinear").field(g).finish(),
            FieldKind::Sign(s) => f.debug_tuple("Sign").field(s).finish(),
            FieldKind::ResourceLoads(p) => f.debug_tuple("ResourceLoads").field(p).finish(),
            FieldKind::ResourceTransformed { params, convention } => f
                .debug_struct("ResourceTransformed")
                .field("params", params)
                .field("convention", convention)
                .finish(),
            FieldKind::Covariance(c) => f.debug_tuple("Covariance").field(c).finish(),
            FieldKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A variational inequality: find `x*` in the domain with
/// `<V(x*), x - x*> >= 0` for every feasible `x`.
#[derive(Debug, Clone)]
pub struct VIProblem {
    pub name: String,
    pub domain: DomainSpec,
    pub field: FieldKind,
    pub regularity: Regularity,
    pub known_solution: Option<Vec<f64>>,
}

impl VIProblem {
    pub fn custom(
        name: impl Into<String>,
        domain: DomainSpec,
        field: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
        regularity: Regularity,
        known_solution: Option<Vec<f64>>,
    ) -> Self {
        VIProblem {
            name: name.into(),
            domain,
            field: FieldKind::Custom(Arc::new(field)),
            regularity,
            known_solution,
        }
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Evaluates `V(x)` into `out`.
    pub fn field_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        check_dim(self.dim(), x.len())?;
        check_dim(self.dim(), out.len())?;
        match &self.field {
            FieldKind::Bilinear(g) => g.eval(x, out),
            FieldKind::Sign(s) => s.eval(x, out),
            FieldKind::ResourceLoads(p) => p.eval_loads(x, out)?,
            FieldKind::ResourceTransformed { params, convention } => {
                params.eval_transformed(*convention, x, out)?
            }
            FieldKind::Covariance(c) => c.eval(x, out),
            FieldKind::Custom(f) => f(x, out),
        }
        Ok(())
    }

    pub fn field(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.field_into(x, &mut out)?;
        Ok(out)
    }

    /// Resource-allocation parameters when this is a resource problem in either
    /// coordinate system.
    pub fn resource_params(&self) -> Option<&ResourceAllocation> {
        match &self.field {
            FieldKind::ResourceLoads(p) => Some(p),
            FieldKind::ResourceTransformed { params, .. } => Some(params),
            _ => None,
        }
    }

    /// Smallest observed `<V(x) - V(x'), x - x'>` over `pairs` sampled interior
    /// pairs. Non-negative (up to rounding) for monotone fields.
    pub fn sampled_monotonicity<R: rand::Rng + ?Sized>(
        &self,
        rng: &mut R,
        pairs: usize,
        margin: f64,
    ) -> Result<f64> {
        let mut worst = f64::INFINITY;
        for _ in 0..pairs {
            let x = self.domain.sample_interior(rng, margin);
            let y = self.domain.sample_interior(rng, margin);
            let vx = self.field(&x)?;
            let vy = self.field(&y)?;
            let value = vecops::dot(&vecops::sub(&vx, &vy), &vecops::sub(&x, &y));
            worst = worst.min(value);
        }
        Ok(worst)
    }
}

/// Stable 64-bit identifier for a problem name; keys RNG streams.
pub(crate) fn stream_id(name: &str) -> u64 {
    // FNV-1a
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
