use rand::Rng;

use crate::error::{check_dim, Error, Result};

/// Feasible sets used by the problem library.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind {
    /// Closed box `lower <= x <= upper`.
    Box {
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    /// `(0, 1]^d`, open at zero.
    OpenUnitBoxUpperClosed,
    /// Load profiles `0 <= l_r < c_r` with `sum_r l_r = R`.
    CapacitySimplex {
        capacities: Vec<f64>,
        inflow: f64,
    },
    /// The image of a capacity simplex under `x_r = 1 - l_r / c_r`:
    /// `x in (0, 1]^d` with `sum_r c_r (1 - x_r) = R`.
    TransformedCapacitySimplex {
        capacities: Vec<f64>,
        inflow: f64,
    },
    Unconstrained,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    dim: usize,
    kind: DomainKind,
}

const SLAB_TOL: f64 = 1e-12;
const SLAB_MAX_ITER: usize = 200;

impl DomainSpec {
    pub fn new(dim: usize, kind: DomainKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfiguration(
                "dimension must be positive".into(),
            ));
        }
        match &kind {
            DomainKind::Box { lower, upper } => {
                check_dim(dim, lower.len())?;
                check_dim(dim, upper.len())?;
                if let Some(i) = (0..dim).find(|&i| !(lower[i] < upper[i])) {
                    return Err(Error::InvalidConfiguration(format!(
                        "box bounds must satisfy lower < upper (coordinate {i}: {} vs {})",
                        lower[i], upper[i]
                    )));
                }
            }
            DomainKind::CapacitySimplex { capacities, inflow }
            | DomainKind::TransformedCapacitySimplex { capacities, inflow } => {
                check_dim(dim, capacities.len())?;
                validate_capacities(capacities, *inflow)?;
            }
            DomainKind::OpenUnitBoxUpperClosed | DomainKind::Unconstrained => {}
        }
        Ok(DomainSpec { dim, kind })
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Self::new(lower.len(), DomainKind::Box { lower, upper })
    }

    pub fn symmetric_box(dim: usize, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidConfiguration(format!(
                "box radius must be positive, got {radius}"
            )));
        }
        Self::boxed(vec![-radius; dim], vec![radius; dim])
    }

    pub fn unit_box_upper_closed(dim: usize) -> Result<Self> {
        Self::new(dim, DomainKind::OpenUnitBoxUpperClosed)
    }

    pub fn capacity_simplex(capacities: Vec<f64>, inflow: f64) -> Result<Self> {
        Self::new(
            capacities.len(),
            DomainKind::CapacitySimplex { capacities, inflow },
        )
    }

    pub fn transformed_capacity_simplex(capacities: Vec<f64>, inflow: f64) -> Result<Self> {
        Self::new(
            capacities.len(),
            DomainKind::TransformedCapacitySimplex { capacities, inflow },
        )
    }

    pub fn unconstrained(dim: usize) -> Result<Self> {
        Self::new(dim, DomainKind::Unconstrained)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    /// Membership test with absolute tolerance `tol` on inequality and equality
    /// constraints. Open faces are always strict.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim || !x.iter().all(|v| v.is_finite()) {
            return false;
        }
        match &self.kind {
            DomainKind::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (lo, hi))| *v >= lo - tol && *v <= hi + tol),
            DomainKind::OpenUnitBoxUpperClosed => x.iter().all(|v| *v > 0.0 && *v <= 1.0 + tol),
            DomainKind::CapacitySimplex { capacities, inflow } => {
                let in_range = x.iter().zip(capacities).all(|(l, c)| *l >= -tol && *l < *c);
                in_range && (x.iter().sum::<f64>() - inflow).abs() <= tol.max(1e-9 * inflow)
            }
            DomainKind::TransformedCapacitySimplex { capacities, inflow } => {
                let in_range = x.iter().all(|v| *v > 0.0 && *v <= 1.0 + tol);
                let load: f64 = x.iter().zip(capacities).map(|(v, c)| c * (1.0 - v)).sum();
                in_range && (load - inflow).abs() <= tol.max(1e-9 * inflow)
            }
            DomainKind::Unconstrained => true,
        }
    }

    /// Errors with [`Error::InvalidPoint`] unless `x` lies in the domain up to `1e-9`.
    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim, x.len())?;
        if self.contains(x, 1e-9) {
            Ok(())
        } else {
            Err(Error::InvalidPoint(format!("{x:?} is outside the domain")))
        }
    }

    /// Euclidean projection onto the closure of the domain.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, x.len())?;
        match &self.kind {
            DomainKind::Box { lower, upper } => Ok(x
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(v, (lo, hi))| v.clamp(*lo, *hi))
                .collect()),
            DomainKind::OpenUnitBoxUpperClosed => Ok(x.iter().map(|v| v.clamp(0.0, 1.0)).collect()),
            DomainKind::CapacitySimplex { capacities, inflow } => {
                let ones = vec![1.0; self.dim];
                let lower = vec![0.0; self.dim];
                project_weighted_slab(x, &ones, &lower, capacities, *inflow)
            }
            DomainKind::TransformedCapacitySimplex { capacities, inflow } => {
                // sum c (1 - x) = R  <=>  sum c x = sum c - R
                let target = capacities.iter().sum::<f64>() - inflow;
                let lower = vec![0.0; self.dim];
                let upper = vec![1.0; self.dim];
                project_weighted_slab(x, capacities, &lower, &upper, target)
            }
            DomainKind::Unconstrained => Ok(x.to_vec()),
        }
    }

    /// Coordinate-wise bounding box of the domain, `None` when unbounded.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match &self.kind {
            DomainKind::Box { lower, upper } => Some((lower.clone(), upper.clone())),
            DomainKind::OpenUnitBoxUpperClosed | DomainKind::TransformedCapacitySimplex { .. } => {
                Some((vec![0.0; self.dim], vec![1.0; self.dim]))
            }
            DomainKind::CapacitySimplex { capacities, .. } => {
                Some((vec![0.0; self.dim], capacities.clone()))
            }
            DomainKind::Unconstrained => None,
        }
    }

    /// A canonical interior point: box midpoint, proportional loads, or the origin.
    pub fn center(&self) -> Vec<f64> {
        match &self.kind {
            DomainKind::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(lo, hi)| 0.5 * (lo + hi))
                .collect(),
            DomainKind::OpenUnitBoxUpperClosed => vec![0.5; self.dim],
            DomainKind::CapacitySimplex { capacities, inflow } => {
                let total: f64 = capacities.iter().sum();
                capacities.iter().map(|c| inflow * c / total).collect()
            }
            DomainKind::TransformedCapacitySimplex { capacities, inflow } => {
                let total: f64 = capacities.iter().sum();
                vec![1.0 - inflow / total; self.dim]
            }
            DomainKind::Unconstrained => vec![0.0; self.dim],
        }
    }

    /// Draws a point from the domain kept `margin` (relative to each
    /// coordinate's range) away from its faces. Unbounded coordinates are
    /// drawn from `[-1, 1]`.
    pub fn sample_interior<R: Rng + ?Sized>(&self, rng: &mut R, margin: f64) -> Vec<f64> {
        let uniform = |rng: &mut R, lo: f64, hi: f64| lo + (hi - lo) * rng.random::<f64>();
        match &self.kind {
            DomainKind::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(lo, hi)| {
                    let w = hi - lo;
                    uniform(rng, lo + margin * w, hi - margin * w)
                })
                .collect(),
            DomainKind::OpenUnitBoxUpperClosed => {
                (0..self.dim).map(|_| uniform(rng, margin, 1.0)).collect()
            }
            DomainKind::CapacitySimplex { capacities, inflow } => {
                let lower: Vec<f64> = capacities.iter().map(|c| margin * c).collect();
                let upper: Vec<f64> = capacities.iter().map(|c| (1.0 - margin) * c).collect();
                let raw: Vec<f64> = capacities.iter().map(|c| uniform(rng, 0.0, *c)).collect();
                let ones = vec![1.0; self.dim];
                project_weighted_slab(&raw, &ones, &lower, &upper, *inflow)
                    .unwrap_or_else(|_| self.center())
            }
            DomainKind::TransformedCapacitySimplex { capacities, inflow } => {
                let target = capacities.iter().sum::<f64>() - inflow;
                let lower = vec![margin; self.dim];
                let upper = vec![1.0; self.dim];
                let raw: Vec<f64> = (0..self.dim).map(|_| uniform(rng, margin, 1.0)).collect();
                project_weighted_slab(&raw, capacities, &lower, &upper, target)
                    .unwrap_or_else(|_| self.center())
            }
            DomainKind::Unconstrained => (0..self.dim).map(|_| uniform(rng, -1.0, 1.0)).collect(),
        }
    }

    /// Whether the domain is a closed set on which Euclidean projection stays feasible.
    pub fn is_closed(&self) -> bool {
        matches!(
            self.kind,
            DomainKind::Box { .. } | DomainKind::Unconstrained
        )
    }
}

fn validate_capacities(capacities: &[f64], inflow: f64) -> Result<()> {
    if let Some(c) = capacities.iter().find(|c| !(**c > 0.0) || !c.is_finite()) {
        return Err(Error::InvalidConfiguration(format!(
            "capacities must be positive and finite, got {c}"
        )));
    }
    let total: f64 = capacities.iter().sum();
    if !(inflow > 0.0 && inflow < total) {
        return Err(Error::InvalidConfiguration(format!(
            "inflow must satisfy 0 < R < sum of capacities ({total}), got {inflow}"
        )));
    }
    Ok(())
}

/// Projects `x` onto `{z : lower <= z <= upper, <weights, z> = target}` with
/// positive weights. The multiplier `mu` of the equality constraint gives
/// `z(mu) = clip(x - mu * weights)`, whose weighted sum is non-increasing in `mu`.
pub(crate) fn project_weighted_slab(
    x: &[f64],
    weights: &[f64],
    lower: &[f64],
    upper: &[f64],
    target: f64,
) -> Result<Vec<f64>> {
    let point = |mu: f64| -> Vec<f64> {
        x.iter()
            .zip(weights)
            .zip(lower.iter().zip(upper))
            .map(|((v, w), (lo, hi))| (v - mu * w).clamp(*lo, *hi))
            .collect()
    };
    let residual =
        |z: &[f64]| -> f64 { z.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() - target };

    let mut lo = -1.0;
    let mut hi = 1.0;
    let mut expansions = 0;
    while residual(&point(lo)) < 0.0 {
        lo *= 2.0;
        expansions += 1;
        if expansions > 200 {
            return Err(Error::NumericalFailure {
                routine: "slab projection bracket",
                residual: residual(&point(lo)),
                iterations: expansions,
            });
        }
    }
    while residual(&point(hi)) > 0.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > 400 {
            return Err(Error::NumericalFailure {
                routine: "slab projection bracket",
                residual: residual(&point(hi)),
                iterations: expansions,
            });
        }
    }
    let scale = target.abs().max(1.0);
    for _ in 0..SLAB_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let z = point(mid);
        let r = residual(&z);
        if r.abs() <= SLAB_TOL * scale || hi - lo <= f64::EPSILON * mid.abs().max(1.0) {
            return Ok(z);
        }
        if r > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z = point(0.5 * (lo + hi));
    let r = residual(&z);
    if r.abs() <= 1e-9 * scale {
        Ok(z)
    } else {
        Err(Error::NumericalFailure {
            routine: "slab projection",
            residual: r,
            iterations: SLAB_MAX_ITER,
        })
    }
}
