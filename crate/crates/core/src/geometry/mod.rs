//! Local norms, Bregman regularizers and prox-mappings.

mod bregman;
pub(crate) mod domain;
mod metric;

pub use bregman::{BregmanFunction, BregmanKind, CAPACITY_PROX_MAX_ITER, CAPACITY_PROX_TOL};
pub use domain::{DomainKind, DomainSpec};
pub use metric::{FinslerMetric, MetricKind};

use crate::error::Result;

/// A Finsler metric paired with a compatible Bregman function.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorGeometry {
    pub metric: FinslerMetric,
    pub bregman: BregmanFunction,
}

impl MirrorGeometry {
    pub fn new(metric: FinslerMetric, bregman: BregmanFunction) -> Self {
        MirrorGeometry { metric, bregman }
    }

    /// Euclidean norm with `||.||^2 / 2` and projections onto `domain`.
    pub fn euclidean(domain: DomainSpec) -> Result<Self> {
        Ok(MirrorGeometry {
            metric: FinslerMetric::euclidean(),
            bregman: BregmanFunction::half_squared_euclidean(domain)?,
        })
    }

    pub fn from_kinds(
        metric: MetricKind,
        bregman: BregmanKind,
        domain: DomainSpec,
    ) -> Result<Self> {
        let dim = domain.dim();
        Ok(MirrorGeometry {
            metric: FinslerMetric::for_kind(metric, dim),
            bregman: BregmanFunction::new(bregman, domain)?,
        })
    }

    pub fn domain(&self) -> &DomainSpec {
        self.bregman.domain()
    }
}
