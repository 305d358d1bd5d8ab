//! Sampled inequality suites. Each returns the number of instances checked
//! or a description of the first violation.

use adaprox::geometry::{BregmanFunction, BregmanKind, DomainSpec, MetricKind, MirrorGeometry};
use adaprox::merit::log_sum_inequality;
use adaprox::prelude::*;
use adaprox::vecops::{dot, sub};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{box_prox_oracle, simplex_prox_oracle};

pub const SAMPLES: usize = 200;
const MARGIN: f64 = 1e-3;

pub type SuiteResult = Result<usize, String>;

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

pub fn geometries() -> Vec<BregmanFunction> {
    vec![
        BregmanFunction::inverse_barrier(DomainSpec::unit_box_upper_closed(3).unwrap()).unwrap(),
        BregmanFunction::inverse_barrier(
            DomainSpec::transformed_capacity_simplex(vec![2.0, 2.0, 2.0], 3.0).unwrap(),
        )
        .unwrap(),
        BregmanFunction::inverse_barrier(
            DomainSpec::transformed_capacity_simplex(vec![1.0, 3.0], 2.0).unwrap(),
        )
        .unwrap(),
        BregmanFunction::half_squared_euclidean(DomainSpec::symmetric_box(3, 1.0).unwrap())
            .unwrap(),
    ]
}

pub fn direction(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-scale..scale)).collect()
}

/// Points drawn with the sampling margin, plus near-boundary points at
/// distance 1e-2 from the singular face.
fn sample(h: &BregmanFunction, rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let margin = if k % 10 == 0 { 1e-2 } else { MARGIN };
    h.domain().sample_interior(rng, margin)
}

/// `SAMPLES` instances per geometry.
pub fn three_point_identity() -> SuiteResult {
    let mut checked = 0;
    for (g, h) in geometries().into_iter().enumerate() {
        let mut rng = rng(g as u64);
        for k in 0..SAMPLES {
            let b = sample(&h, &mut rng, k);
            let x = sample(&h, &mut rng, k + 1);
            let xp = sample(&h, &mut rng, k + 2);
            let lhs = h.divergence(&b, &xp).unwrap();
            let grad_diff = sub(&h.gradient(&xp).unwrap(), &h.gradient(&x).unwrap());
            let cross = dot(&grad_diff, &sub(&x, &b));
            let rhs = h.divergence(&b, &x).unwrap() + h.divergence(&x, &xp).unwrap() + cross;
            let scale = lhs.abs().max(rhs.abs()).max(cross.abs()).max(1.0);
            if (lhs - rhs).abs() > 1e-9 * scale {
                return Err(format!(
                    "geometry {g}: {lhs} vs {rhs} at b={b:?} x={x:?} x'={xp:?}"
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

pub fn prox_descent() -> SuiteResult {
    let mut checked = 0;
    for (g, h) in geometries().into_iter().enumerate() {
        let mut rng = rng(10 + g as u64);
        for k in 0..SAMPLES {
            let x = sample(&h, &mut rng, k);
            let b = sample(&h, &mut rng, k + 1);
            let y = direction(&mut rng, x.len(), 5.0);
            let xp = h.prox(&x, &y).unwrap();
            let lhs = h.divergence(&b, &xp).unwrap();
            let rhs = h.divergence(&b, &x).unwrap() - h.divergence(&xp, &x).unwrap()
                + dot(&y, &sub(&xp, &b));
            if lhs > rhs + 1e-8 {
                return Err(format!("geometry {g}: {lhs} > {rhs}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

pub fn two_prox() -> SuiteResult {
    let mut checked = 0;
    for (g, h) in geometries().into_iter().enumerate() {
        let mut rng = rng(20 + g as u64);
        for k in 0..SAMPLES {
            let x = sample(&h, &mut rng, k);
            let b = sample(&h, &mut rng, k + 1);
            let y1 = direction(&mut rng, x.len(), 3.0);
            let y2 = direction(&mut rng, x.len(), 3.0);
            let x1 = h.prox(&x, &y1).unwrap();
            let x2 = h.prox(&x, &y2).unwrap();
            let lhs = h.divergence(&b, &x2).unwrap();
            let rhs = h.divergence(&b, &x).unwrap()
                + dot(&y2, &sub(&x1, &b))
                + dot(&sub(&y2, &y1), &sub(&x2, &x1))
                - h.divergence(&x2, &x1).unwrap()
                - h.divergence(&x1, &x).unwrap();
            if lhs > rhs + 1e-8 {
                return Err(format!("geometry {g}: {lhs} > {rhs}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

pub struct EnergyCase {
    pub problem: VIProblem,
    pub geometry: MirrorGeometry,
    pub x1: Vec<f64>,
}

pub fn energy_cases() -> Vec<EnergyCase> {
    let bilinear = make_bilinear(3, 21, vec![0.3, -0.1, 0.0], vec![0.2, 0.2, -0.6], 1.0).unwrap();
    let sign = make_sign_field(4, 1.0, vec![0.3, -0.2, 0.1, 0.0], 1.0).unwrap();
    let loads = make_resource_allocation(vec![2.0, 2.0, 2.0], 3.0, 0.0).unwrap();
    let transformed = to_transformed_coordinates(&loads).unwrap();
    let loads_reg = make_resource_allocation(vec![1.0, 3.0, 2.0], 2.5, 0.5).unwrap();
    let transformed_reg = to_transformed_coordinates(&loads_reg).unwrap();
    let barrier = |p: &VIProblem| {
        MirrorGeometry::from_kinds(
            MetricKind::InverseBox,
            BregmanKind::InverseBarrier,
            p.domain.clone(),
        )
        .unwrap()
    };
    vec![
        EnergyCase {
            geometry: MirrorGeometry::euclidean(bilinear.domain.clone()).unwrap(),
            x1: vec![0.9; 6],
            problem: bilinear,
        },
        EnergyCase {
            geometry: MirrorGeometry::euclidean(sign.domain.clone()).unwrap(),
            x1: vec![0.9, 0.7, -0.8, -0.5],
            problem: sign,
        },
        EnergyCase {
            geometry: barrier(&transformed),
            x1: vec![0.3, 0.5, 0.7],
            problem: transformed,
        },
        EnergyCase {
            geometry: barrier(&transformed_reg),
            x1: transformed_reg.domain.center(),
            problem: transformed_reg,
        },
    ]
}

/// 50 iterations times 4 base points per case. The cross term enters with
/// the sign given by the two-prox bound with `y1 = -eta g_n`,
/// `y2 = -eta g_{n+1/2}`.
pub fn energy_inequality() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut checked = 0;
    for case in energy_cases() {
        let h = &case.geometry.bregman;
        let mut state = SolverState::new(case.x1.clone(), StepPolicy::adaptive());
        let mut oracle = &case.problem;
        let mut per_case = 0;
        for _ in 0..50 {
            let r = match adaprox_step(&mut state, &mut oracle, &case.geometry).unwrap() {
                StepOutcome::Advanced(r) => r,
                other => return Err(format!("{}: unexpected {other:?}", case.problem.name)),
            };
            let (x, lead, next) = (&r.x_prev, &state.x_lead, &state.x);
            for _ in 0..4 {
                let p = case.problem.domain.sample_interior(&mut rng, 1e-3);
                let lhs = h.divergence(&p, next).unwrap();
                let rhs = h.divergence(&p, x).unwrap()
                    - r.eta * dot(&r.signal_lead, &sub(lead, &p))
                    - r.eta * dot(&sub(&r.signal_lead, &r.signal), &sub(next, lead))
                    - h.divergence(next, lead).unwrap()
                    - h.divergence(lead, x).unwrap();
                if lhs > rhs + 1e-7 {
                    return Err(format!("{}: {lhs} > {rhs}", case.problem.name));
                }
                per_case += 1;
            }
        }
        if per_case != SAMPLES {
            return Err(format!("{}: {per_case} instances", case.problem.name));
        }
        checked += per_case;
    }
    Ok(checked)
}

pub fn logarithmic_lemma() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for k in 0..500 {
        let len = rng.random_range(1..=100);
        let scale = 10f64.powi(k % 7 - 3);
        let a: Vec<f64> = (0..len).map(|_| scale * rng.random::<f64>()).collect();
        let (lhs, rhs) = log_sum_inequality(&a);
        if lhs > rhs {
            return Err(format!("sequence {k}: {lhs} > {rhs}"));
        }
    }
    Ok(500)
}

/// Barrier prox against numeric minimization on 50 instances, alternating
/// boxes of dimension 1..=3 and two-link capacity simplices.
pub fn prox_matches_oracle() -> SuiteResult {
    let mut rng = rng(60);
    for k in 0..50 {
        let (got, want) = if k % 2 == 0 {
            let d = 1 + k % 3;
            let h = BregmanFunction::inverse_barrier(DomainSpec::unit_box_upper_closed(d).unwrap())
                .unwrap();
            let x = h.domain().sample_interior(&mut rng, 0.05);
            let y = direction(&mut rng, d, 5.0);
            (h.prox(&x, &y).unwrap(), box_prox_oracle(&x, &y))
        } else {
            let c = vec![rng.random_range(1.0..4.0), rng.random_range(1.0..4.0)];
            let inflow = rng.random_range(0.2..0.9) * (c[0] + c[1]);
            let h = BregmanFunction::inverse_barrier(
                DomainSpec::transformed_capacity_simplex(c.clone(), inflow).unwrap(),
            )
            .unwrap();
            let x = h.domain().sample_interior(&mut rng, 0.05);
            let y = direction(&mut rng, 2, 5.0);
            (
                h.prox(&x, &y).unwrap(),
                simplex_prox_oracle(&c, inflow, &x, &y),
            )
        };
        if got.iter().zip(&want).any(|(a, b)| (a - b).abs() >= 1e-6) {
            return Err(format!("instance {k}: {got:?} vs {want:?}"));
        }
    }
    Ok(50)
}
