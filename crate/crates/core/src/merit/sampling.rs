//! Deterministic low-discrepancy points and box-constrained local ascent.

use crate::error::{Error, Result};
use crate::geometry::domain::project_weighted_slab;
use crate::geometry::{DomainKind, DomainSpec};

/// Additive recurrence `u_n = frac(1/2 + n alpha)` with `alpha_j = phi_d^-(j+1)`,
/// where `phi_d` is the positive root of `x^(d+1) = x + 1`.
pub struct KroneckerSequence {
    alpha: Vec<f64>,
    index: u64,
}

impl KroneckerSequence {
    pub fn new(dim: usize) -> Self {
        let power = (dim + 1) as f64;
        let mut phi = 2.0_f64;
        for _ in 0..64 {
            let f = phi.powf(power) - phi - 1.0;
            let df = power * phi.powf(power - 1.0) - 1.0;
            phi -= f / df;
        }
        let alpha = (1..=dim).map(|j| phi.powi(-(j as i32))).collect();
        KroneckerSequence { alpha, index: 1 }
    }

    pub fn next_point(&mut self) -> Vec<f64> {
        let n = self.index as f64;
        self.index += 1;
        self.alpha.iter().map(|a| (0.5 + n * a).fract()).collect()
    }
}

/// A compact convex search region: the intersection of a coordinate box with
/// the equality constraints of a domain.
#[derive(Debug, Clone)]
pub(crate) struct Region {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    slab: Option<(Vec<f64>, f64)>,
}

/// Lower bound kept on open faces at zero.
const OPEN_FACE_FLOOR: f64 = 1e-9;

impl Region {
    pub fn new(domain: &DomainSpec, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let (mut lower, upper) = (lower, upper);
        let slab = match domain.kind() {
            DomainKind::OpenUnitBoxUpperClosed => {
                lower.iter_mut().for_each(|v| *v = v.max(OPEN_FACE_FLOOR));
                None
            }
            DomainKind::CapacitySimplex { inflow, .. } => Some((vec![1.0; domain.dim()], *inflow)),
            DomainKind::TransformedCapacitySimplex { capacities, inflow } => {
                lower.iter_mut().for_each(|v| *v = v.max(OPEN_FACE_FLOOR));
                Some((capacities.clone(), capacities.iter().sum::<f64>() - inflow))
            }
            DomainKind::Box { .. } | DomainKind::Unconstrained => None,
        };
        if let Some(i) = (0..lower.len()).find(|&i| !(lower[i] <= upper[i])) {
            return Err(Error::InvalidConfiguration(format!(
                "test region is empty along coordinate {i}"
            )));
        }
        if let Some((w, target)) = &slab {
            let lo: f64 = w.iter().zip(&lower).map(|(a, b)| a * b).sum();
            let hi: f64 = w.iter().zip(&upper).map(|(a, b)| a * b).sum();
            if *target < lo - 1e-12 || *target > hi + 1e-12 {
                return Err(Error::InvalidConfiguration(
                    "test region misses the domain's equality constraint".into(),
                ));
            }
        }
        Ok(Region { lower, upper, slab })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.upper
            .iter()
            .zip(&self.lower)
            .map(|(u, l)| u - l)
            .collect()
    }

    pub fn project(&self, p: &[f64]) -> Result<Vec<f64>> {
        match &self.slab {
            None => Ok(p
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .map(|(v, (lo, hi))| v.clamp(*lo, *hi))
                .collect()),
            Some((w, target)) => project_weighted_slab(p, w, &self.lower, &self.upper, *target),
        }
    }

    pub fn point_from_unit(&self, u: &[f64]) -> Result<Vec<f64>> {
        let raw: Vec<f64> = u
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(t, (lo, hi))| lo + t * (hi - lo))
            .collect();
        self.project(&raw)
    }

    pub fn center(&self) -> Result<Vec<f64>> {
        self.point_from_unit(&vec![0.5; self.dim()])
    }
}

/// Knobs of the sampled supremum estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub samples: usize,
    pub refine_starts: usize,
    pub refine_steps: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            samples: 4096,
            refine_starts: 10,
            refine_steps: 50,
        }
    }
}

/// Lower estimate of `sup_{p in region} objective(p)`: low-discrepancy
/// sampling followed by projected ascent from the best samples.
pub(crate) fn sampled_supremum<F>(
    region: &Region,
    budget: SearchBudget,
    mut objective: F,
) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    if budget.samples == 0 {
        return Err(Error::InvalidConfiguration(
            "sample budget must be positive".into(),
        ));
    }
    let mut candidates: Vec<(f64, Vec<f64>)> = Vec::with_capacity(budget.samples + 1);
    let center = region.center()?;
    candidates.push((objective(&center)?, center));
    let mut seq = KroneckerSequence::new(region.dim());
    for _ in 0..budget.samples {
        let p = region.point_from_unit(&seq.next_point())?;
        let value = objective(&p)?;
        candidates.push((value, p));
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    candidates.truncate(budget.refine_starts.max(1));

    let mut best = candidates[0].0;
    for (value, start) in candidates {
        if region.slab.is_none() {
            let refined = coordinate_search(
                region,
                start.clone(),
                value,
                budget.refine_steps,
                &mut objective,
            )?;
            best = best.max(refined);
        }
        let refined = ascend(region, start, value, budget.refine_steps, &mut objective)?;
        best = best.max(refined);
    }
    Ok(best)
}

fn ascend<F>(
    region: &Region,
    start: Vec<f64>,
    start_value: f64,
    steps: usize,
    objective: &mut F,
) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let widths = region.widths();
    let span = widths.iter().copied().fold(0.0, f64::max);
    if span == 0.0 || steps == 0 {
        return Ok(start_value);
    }
    let mut p = start;
    let mut value = start_value;
    let mut step = 0.5 * span;
    let mut grad = vec![0.0; p.len()];
    for _ in 0..steps {
        for i in 0..p.len() {
            if widths[i] == 0.0 {
                grad[i] = 0.0;
                continue;
            }
            let h = 1e-7 * widths[i].max(1e-3);
            let mut forward = p.clone();
            let mut backward = p.clone();
            forward[i] = (p[i] + h).min(region.upper[i]);
            backward[i] = (p[i] - h).max(region.lower[i]);
            let spread = forward[i] - backward[i];
            grad[i] = if spread > 0.0 {
                (objective(&forward)? - objective(&backward)?) / spread
            } else {
                0.0
            };
        }
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            break;
        }
        let candidate: Vec<f64> = p
            .iter()
            .zip(&grad)
            .map(|(v, g)| v + step * g / norm)
            .collect();
        let candidate = region.project(&candidate)?;
        let candidate_value = objective(&candidate)?;
        if candidate_value > value {
            p = candidate;
            value = candidate_value;
            step = (2.0 * step).min(span);
        } else {
            step *= 0.5;
        }
    }
    Ok(value)
}

/// Per-coordinate pattern search with individual step lengths; robust to
/// objectives that are discontinuous along coordinate hyperplanes.
fn coordinate_search<F>(
    region: &Region,
    mut p: Vec<f64>,
    mut value: f64,
    sweeps: usize,
    objective: &mut F,
) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let mut step: Vec<f64> = region.widths().iter().map(|w| 0.25 * w).collect();
    let mut dir = vec![1.0; p.len()];
    for _ in 0..sweeps {
        for i in 0..p.len() {
            if step[i] == 0.0 {
                continue;
            }
            let original = p[i];
            let mut improved = false;
            for sign in [dir[i], -dir[i]] {
                p[i] = (original + sign * step[i]).clamp(region.lower[i], region.upper[i]);
                if p[i] == original {
                    continue;
                }
                let v = objective(&p)?;
                if v > value {
                    value = v;
                    dir[i] = sign;
                    improved = true;
                    break;
                }
            }
            if improved {
                step[i] *= 2.0;
            } else {
                p[i] = original;
                step[i] *= 0.5;
            }
        }
    }
    Ok(value)
}
