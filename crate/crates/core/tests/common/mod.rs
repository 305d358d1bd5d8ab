//! Brute-force oracles shared by the integration suites.
#![allow(dead_code)]

pub mod suites;

/// Golden-section minimization of a unimodal function on `[lo, hi]` after a
/// coarse grid scan.
pub fn minimize_1d(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let grid = 400;
    let at = |k: usize| lo + (hi - lo) * k as f64 / grid as f64;
    let k_best = (0..=grid)
        .min_by(|a, b| f(at(*a)).total_cmp(&f(at(*b))))
        .unwrap();
    let (mut a, mut b) = (at(k_best.saturating_sub(1)), at((k_best + 1).min(grid)));
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    for _ in 0..200 {
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - r * (b - a);
        d = a + r * (b - a);
    }
    0.5 * (a + b)
}

/// Numeric prox on `(0, 1]^d`: the objective `h(x') - <grad h(x) + y, x'>` is separable.
pub fn box_prox_oracle(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(y)
        .map(|(xi, yi)| {
            let s = 1.0 / (xi * xi) - yi;
            minimize_1d(&|t| 1.0 / t + s * t, 1e-6, 1.0)
        })
        .collect()
}

/// Numeric prox on the transformed capacity simplex for `d = 2`: eliminate
/// the second coordinate through the constraint.
pub fn simplex_prox_oracle(c: &[f64], inflow: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    let s: Vec<f64> = x.iter().zip(y).map(|(a, b)| 1.0 / (a * a) - b).collect();
    let second = |x1: f64| 1.0 - (inflow - c[0] * (1.0 - x1)) / c[1];
    // feasible x1: x2 in (0, 1]
    let lo = (1.0 - inflow / c[0]).max(1e-6);
    let hi = (1.0 - (inflow - c[1]) / c[0]).min(1.0);
    let objective = |x1: f64| {
        let x2 = second(x1);
        if x2 <= 0.0 {
            return f64::INFINITY;
        }
        1.0 / x1 + s[0] * x1 + 1.0 / x2 + s[1] * x2
    };
    let x1 = minimize_1d(&objective, lo + 1e-9, hi);
    vec![x1, second(x1)]
}
