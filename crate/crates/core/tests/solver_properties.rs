//! Trajectory-level checks of the extra-gradient and mirror-prox iterations.

mod common;

use adaprox::geometry::{BregmanKind, DomainSpec, MetricKind, MirrorGeometry};
use adaprox::prelude::*;
use adaprox::vecops::{dot, norm2, sub};
use common::{simplex_prox_oracle, suites};

fn scalar_game() -> VIProblem {
    make_bilinear_with_matrix(1, vec![1.0], vec![0.0], vec![0.0], 1.0).unwrap()
}

fn advanced(outcome: StepOutcome) -> adaprox::solvers::StepReport {
    match outcome {
        StepOutcome::Advanced(r) => r,
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn eg_single_step_by_hand() {
    let p = scalar_game();
    let mut state = SolverState::new(
        vec![1.0, 1.0],
        StepPolicy::new(StepKind::Constant(0.5)).unwrap(),
    );
    let mut oracle = &p;
    let report = advanced(eg_step(&mut state, &mut oracle, &p.domain).unwrap());
    // g = V(1,1) = (1,-1); lead = clip((0.5, 1.5)) = (0.5, 1)
    // g' = V(0.5,1) = (1,-0.5); next = clip((0.5, 1.25)) = (0.5, 1)
    assert_eq!(report.signal, vec![1.0, -1.0]);
    assert_eq!(state.x_lead, vec![0.5, 1.0]);
    assert_eq!(report.signal_lead, vec![1.0, -0.5]);
    assert_eq!(state.x, vec![0.5, 1.0]);
    assert_eq!(report.delta, 0.5);
    assert_eq!(state.ergodic_average(), vec![0.5, 1.0]);
}

#[test]
fn zero_field_and_solution_are_fixed_points() {
    let dom = DomainSpec::symmetric_box(3, 1.0).unwrap();
    let zero = VIProblem::custom(
        "zero",
        dom,
        |_, out| out.fill(0.0),
        Regularity::default(),
        None,
    );
    let x = vec![0.2, -0.7, 0.9];
    let mut state = SolverState::new(x.clone(), StepPolicy::adaptive());
    let mut oracle = &zero;
    advanced(eg_step(&mut state, &mut oracle, &zero.domain).unwrap());
    assert_eq!(state.x, x);
    assert_eq!(state.x_lead, x);

    let p = make_bilinear(2, 3, vec![0.1, -0.4], vec![0.25, 0.5], 1.0).unwrap();
    let sol = p.known_solution.clone().unwrap();
    let mut state = SolverState::new(sol.clone(), StepPolicy::adaptive());
    let mut oracle = &p;
    advanced(eg_step(&mut state, &mut oracle, &p.domain).unwrap());
    assert_eq!(state.x, sol);
    assert_eq!(state.x_lead, sol);
}

#[test]
fn adaptive_eg_equals_euclidean_adaprox() {
    let p = make_bilinear(5, 8, vec![0.1; 5], vec![-0.2; 5], 1.0).unwrap();
    let x1 = vec![0.9; 10];
    let eg = run(
        &mut &p,
        &Algorithm::Extragradient(StepKind::Adaptive),
        x1.clone(),
        100,
        CheckpointSchedule::default(),
    )
    .unwrap();
    let geometry = MirrorGeometry::euclidean(p.domain.clone()).unwrap();
    let ap = run(
        &mut &p,
        &Algorithm::AdaProx(geometry),
        x1,
        100,
        CheckpointSchedule::default(),
    )
    .unwrap();
    assert_eq!(eg.checkpoints.len(), 100);
    for (a, b) in eg.checkpoints.iter().zip(&ap.checkpoints) {
        for (u, v) in a.x.iter().chain(&a.x_lead).zip(b.x.iter().chain(&b.x_lead)) {
            assert!((u - v).abs() <= 1e-12);
        }
    }
    for (a, b) in eg.steps.iter().zip(&ap.steps) {
        assert!((a.eta - b.eta).abs() <= 1e-12 && (a.delta - b.delta).abs() <= 1e-12);
    }
}

#[test]
fn energy_inequality_along_trajectories() {
    assert_eq!(suites::energy_inequality(), Ok(4 * suites::SAMPLES));
}

/// With the cross term's sign flipped the bound is false: one unconstrained
/// extra-gradient step on `xy` from `(1, 1)` with `eta = 0.5`, base point 0.
#[test]
fn energy_bound_with_flipped_cross_term_fails() {
    let dom = DomainSpec::unconstrained(2).unwrap();
    let p = VIProblem::custom(
        "xy",
        dom.clone(),
        |x, out| {
            out[0] = x[1];
            out[1] = -x[0];
        },
        Regularity::default(),
        None,
    );
    let h = adaprox::geometry::BregmanFunction::half_squared_euclidean(dom.clone()).unwrap();
    let mut state = SolverState::new(
        vec![1.0, 1.0],
        StepPolicy::new(StepKind::Constant(0.5)).unwrap(),
    );
    let r = advanced(eg_step(&mut state, &mut &p, &dom).unwrap());
    assert_eq!(state.x_lead, vec![0.5, 1.5]);
    assert_eq!(state.x, vec![0.25, 1.25]);
    let (x, lead, next) = (&r.x_prev, &state.x_lead, &state.x);
    let base = [0.0, 0.0];
    let common = h.divergence(&base, x).unwrap()
        - r.eta * dot(&r.signal_lead, &sub(lead, &base))
        - h.divergence(next, lead).unwrap()
        - h.divergence(lead, x).unwrap();
    let cross = r.eta * dot(&sub(&r.signal_lead, &r.signal), &sub(next, lead));
    let lhs = h.divergence(&base, next).unwrap();
    assert_eq!((lhs, common, cross), (0.8125, 0.6875, -0.125));
    assert!(lhs <= common - cross);
    assert!(lhs > common + cross);
}

#[test]
fn residuals_respect_metric_bound() {
    for case in suites::energy_cases() {
        let g = case
            .problem
            .regularity
            .metric_bound
            .or(case.problem.regularity.euclidean_bound)
            .unwrap();
        let beta = case.geometry.metric.beta;
        let k = case.geometry.bregman.strong_convexity;
        let bound = 2.0 * g + 4.0 * beta * g / k;
        let trace = run(
            &mut &case.problem,
            &Algorithm::AdaProx(case.geometry.clone()),
            case.x1.clone(),
            2000,
            CheckpointSchedule::default(),
        )
        .unwrap();
        assert!(!trace.diverged);
        let worst = trace.steps.iter().map(|s| s.delta).fold(0.0, f64::max);
        assert!(
            worst <= bound + 1e-7,
            "{}: {worst} > {bound}",
            case.problem.name
        );
    }
}

#[test]
fn step_size_tracks_residual_sum() {
    for case in suites::energy_cases() {
        let trace = run(
            &mut &case.problem,
            &Algorithm::AdaProx(case.geometry.clone()),
            case.x1.clone(),
            500,
            CheckpointSchedule::default(),
        )
        .unwrap();
        assert_eq!(trace.steps[0].eta, 1.0);
        for pair in trace.steps.windows(2) {
            let s = pair[0].sum_delta_sq;
            let eta_next = pair[1].eta;
            let implied = 1.0 / (eta_next * eta_next) - 1.0;
            assert!((implied - s).abs() <= 1e-12 * (1.0 + s), "{implied} vs {s}");
            assert!(pair[1].eta <= pair[0].eta);
        }
    }
}

#[test]
fn barrier_step_matches_numeric_prox() {
    let loads = make_resource_allocation(vec![2.0, 2.0], 2.0, 0.0).unwrap();
    let p = to_transformed_coordinates(&loads).unwrap();
    let geometry = MirrorGeometry::from_kinds(
        MetricKind::InverseBox,
        BregmanKind::InverseBarrier,
        p.domain.clone(),
    )
    .unwrap();
    for x1 in [vec![0.5, 0.5], vec![0.3, 0.7], vec![0.9, 0.1]] {
        let mut state = SolverState::new(x1.clone(), StepPolicy::adaptive());
        let r = advanced(adaprox_step(&mut state, &mut &p, &geometry).unwrap());
        let g = p.field(&x1).unwrap();
        let y: Vec<f64> = g.iter().map(|v| -v).collect();
        let lead = simplex_prox_oracle(&[2.0, 2.0], 2.0, &x1, &y);
        let g_lead = p.field(&lead).unwrap();
        let y_lead: Vec<f64> = g_lead.iter().map(|v| -v).collect();
        let next = simplex_prox_oracle(&[2.0, 2.0], 2.0, &x1, &y_lead);
        let delta: f64 = lead
            .iter()
            .zip(g_lead.iter().zip(&g))
            .map(|(x, (a, b))| x * (a - b).abs())
            .sum();
        for (a, b) in state
            .x_lead
            .iter()
            .zip(&lead)
            .chain(state.x.iter().zip(&next))
        {
            assert!((a - b).abs() < 1e-6, "{x1:?}: {a} vs {b}");
        }
        assert!((r.delta - delta).abs() < 1e-6, "{} vs {delta}", r.delta);
        assert_eq!(r.eta, 1.0);
    }
}

#[test]
fn single_iteration_trace() {
    let p = scalar_game();
    let trace = run(
        &mut &p,
        &Algorithm::Extragradient(StepKind::Constant(0.5)),
        vec![1.0, 1.0],
        1,
        CheckpointSchedule::default(),
    )
    .unwrap();
    assert_eq!(trace.steps.len(), 1);
    assert_eq!(trace.checkpoints.len(), 1);
    assert_eq!(trace.checkpoints[0].x, vec![1.0, 1.0]);
    assert_eq!(trace.checkpoints[0].average, trace.checkpoints[0].x_lead);
    assert!(run(
        &mut &p,
        &Algorithm::Extragradient(StepKind::Constant(0.5)),
        vec![1.0, 1.0],
        0,
        CheckpointSchedule::default()
    )
    .is_err());
}

#[test]
fn runs_are_deterministic() {
    let p = make_bilinear(4, 2, vec![0.1; 4], vec![0.0; 4], 1.0).unwrap();
    let geometry = MirrorGeometry::euclidean(p.domain.clone()).unwrap();
    let go = |seed| {
        let mut oracle = StochasticOracle::gaussian(p.clone(), 1.0, seed).unwrap();
        run(
            &mut oracle,
            &Algorithm::AdaProx(geometry.clone()),
            vec![1.0; 8],
            1000,
            CheckpointSchedule::default(),
        )
        .unwrap()
    };
    assert_eq!(go(3), go(3));
    assert_ne!(go(3).steps, go(4).steps);
}

#[test]
fn escaping_iterates_flag_divergence() {
    let dom = DomainSpec::unconstrained(2).unwrap();
    let repulsive = VIProblem::custom(
        "repulsive",
        dom,
        |x, out| out.iter_mut().zip(x).for_each(|(o, v)| *o = -v),
        Regularity::default(),
        None,
    );
    let trace = run(
        &mut &repulsive,
        &Algorithm::Extragradient(StepKind::Constant(1.0)),
        vec![1.0, -1.0],
        1000,
        CheckpointSchedule::default(),
    )
    .unwrap();
    assert!(trace.diverged);
    assert!(trace.steps.len() < 30);
    assert!(norm2(&trace.final_state.x) <= adaprox::solvers::DIVERGENCE_NORM);
}

#[test]
fn averages_are_convex_combinations_of_leads() {
    let p = make_bilinear(2, 4, vec![0.0; 2], vec![0.0; 2], 1.0).unwrap();
    let trace = run(
        &mut &p,
        &Algorithm::Extragradient(StepKind::InverseSqrt(0.7)),
        vec![-1.0, 1.0, 0.5, 0.5],
        50,
        CheckpointSchedule::default(),
    )
    .unwrap();
    let mut num = vec![0.0; 4];
    let mut den = 0.0;
    for (step, cp) in trace.steps.iter().zip(&trace.checkpoints) {
        for (a, v) in num.iter_mut().zip(&cp.x_lead) {
            *a += step.eta * v;
        }
        den += step.eta;
        for (a, b) in cp.average.iter().zip(&num) {
            assert!((a - b / den).abs() < 1e-14);
        }
    }
}
