use super::sampling::{sampled_supremum, Region, SearchBudget};
use crate::error::{Error, Result};
use crate::geometry::{BregmanFunction, DomainSpec};
use crate::problems::VIProblem;
use crate::vecops;

#[derive(Debug, Clone, PartialEq)]
pub enum TestDomainKind {
    /// The whole (bounded) problem domain.
    FullBox,
    /// The sup-norm ball of `radius` around `center`, intersected with the domain.
    ShrunkNeighborhood { center: Vec<f64>, radius: f64 },
}

/// The convex set over which the restricted gap takes its supremum.
#[derive(Debug, Clone, PartialEq)]
pub struct TestDomain {
    pub kind: TestDomainKind,
    pub budget: SearchBudget,
}

/// Fraction of the smallest domain half-width used for solution neighborhoods.
pub const NEIGHBORHOOD_FRACTION: f64 = 0.25;

impl TestDomain {
    pub fn full_box() -> Self {
        TestDomain {
            kind: TestDomainKind::FullBox,
            budget: SearchBudget::default(),
        }
    }

    pub fn neighborhood(center: Vec<f64>, radius: f64) -> Self {
        TestDomain {
            kind: TestDomainKind::ShrunkNeighborhood { center, radius },
            budget: SearchBudget::default(),
        }
    }

    /// Neighborhood of the problem's known solution with radius a quarter of
    /// the domain's smallest half-width.
    pub fn around_solution(problem: &VIProblem) -> Result<Self> {
        let center = problem.known_solution.clone().ok_or_else(|| {
            Error::InvalidConfiguration(format!("{} has no known solution", problem.name))
        })?;
        let (lower, upper) = problem.domain.bounding_box().ok_or_else(|| {
            Error::InvalidConfiguration("solution neighborhoods need a bounded domain".into())
        })?;
        let half_width = lower
            .iter()
            .zip(&upper)
            .map(|(l, u)| 0.5 * (u - l))
            .fold(f64::INFINITY, f64::min);
        Ok(Self::neighborhood(
            center,
            NEIGHBORHOOD_FRACTION * half_width,
        ))
    }

    pub fn with_budget(mut self, budget: SearchBudget) -> Self {
        self.budget = budget;
        self
    }

    pub(crate) fn region(&self, domain: &DomainSpec) -> Result<Region> {
        let bounds = domain.bounding_box().ok_or_else(|| {
            Error::InvalidConfiguration(
                "unbounded domain needs an explicit test neighborhood".into(),
            )
        });
        match &self.kind {
            TestDomainKind::FullBox => {
                let (lower, upper) = bounds?;
                Region::new(domain, lower, upper)
            }
            TestDomainKind::ShrunkNeighborhood { center, radius } => {
                if center.len() != domain.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: domain.dim(),
                        got: center.len(),
                    });
                }
                if !(*radius >= 0.0) || !radius.is_finite() {
                    return Err(Error::InvalidConfiguration(format!(
                        "neighborhood radius must be finite and non-negative, got {radius}"
                    )));
                }
                let mut lo: Vec<f64> = center.iter().map(|c| c - radius).collect();
                let mut hi: Vec<f64> = center.iter().map(|c| c + radius).collect();
                if let Ok((dl, du)) = bounds {
                    for i in 0..lo.len() {
                        lo[i] = lo[i].max(dl[i]);
                        hi[i] = hi[i].min(du[i]);
                    }
                }
                Region::new(domain, lo, hi)
            }
        }
    }
}

fn gap_objective<'a>(
    problem: &'a VIProblem,
    candidate: &'a [f64],
) -> impl FnMut(&[f64]) -> Result<f64> + 'a {
    let mut field = vec![0.0; problem.dim()];
    move |p: &[f64]| {
        problem.field_into(p, &mut field)?;
        Ok(field
            .iter()
            .zip(candidate.iter().zip(p))
            .map(|(v, (c, q))| v * (c - q))
            .sum())
    }
}

/// Estimate of `sup_{p in C} <V(p), x - p>`. The estimate never exceeds the
/// true supremum by more than rounding.
pub fn restricted_gap(problem: &VIProblem, test: &TestDomain, candidate: &[f64]) -> Result<f64> {
    crate::error::check_dim(problem.dim(), candidate.len())?;
    let region = test.region(&problem.domain)?;
    sampled_supremum(&region, test.budget, gap_objective(problem, candidate))
}

/// Brute-force gap over a regular grid with `points_per_axis` nodes per
/// coordinate. Only for `dim <= 3`.
pub fn restricted_gap_grid(
    problem: &VIProblem,
    test: &TestDomain,
    candidate: &[f64],
    points_per_axis: usize,
) -> Result<f64> {
    crate::error::check_dim(problem.dim(), candidate.len())?;
    let region = test.region(&problem.domain)?;
    grid_supremum(&region, points_per_axis, gap_objective(problem, candidate))
}

fn grid_supremum<F>(region: &Region, points_per_axis: usize, mut objective: F) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let d = region.dim();
    if d > 3 {
        return Err(Error::InvalidArgument(format!(
            "grid search is limited to three dimensions, got {d}"
        )));
    }
    if points_per_axis < 2 {
        return Err(Error::InvalidArgument(
            "grid needs at least two points per axis".into(),
        ));
    }
    let total = points_per_axis.pow(d as u32);
    let mut best = f64::NEG_INFINITY;
    let mut unit = vec![0.0; d];
    for flat in 0..total {
        let mut rest = flat;
        for u in unit.iter_mut() {
            *u = (rest % points_per_axis) as f64 / (points_per_axis - 1) as f64;
            rest /= points_per_axis;
        }
        let p = region.point_from_unit(&unit)?;
        best = best.max(objective(&p)?);
    }
    Ok(best)
}

/// Sampled `sup_{p in C} D(p, x1)`.
pub fn bregman_depth(h: &BregmanFunction, test: &TestDomain, x1: &[f64]) -> Result<f64> {
    let region = test.region(h.domain())?;
    sampled_supremum(&region, test.budget, |p| h.divergence(p, x1))
}

/// Grid version of [`bregman_depth`] for `dim <= 3`.
pub fn bregman_depth_grid(
    h: &BregmanFunction,
    test: &TestDomain,
    x1: &[f64],
    points_per_axis: usize,
) -> Result<f64> {
    let region = test.region(h.domain())?;
    grid_supremum(&region, points_per_axis, |p| h.divergence(p, x1))
}

/// `||V(x)||_2^2` of the exact field.
pub fn grad_norm_sq(problem: &VIProblem, x: &[f64]) -> Result<f64> {
    problem.domain.check_point(x)?;
    let v = problem.field(x)?;
    Ok(vecops::dot(&v, &v))
}
