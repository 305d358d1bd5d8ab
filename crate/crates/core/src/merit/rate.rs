use crate::error::{Error, Result};

/// Least-squares fit of `log m_n = intercept + slope * log n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// First and last iteration index used.
    pub window: (f64, f64),
}

pub const MIN_RATE_POINTS: usize = 10;

/// Fits a power law to the `(n, m_n)` pairs whose `n` lies in the last
/// `window_fraction` of the observed iteration range. Non-positive merit
/// values are dropped with a warning.
pub fn fit_rate(series: &[(f64, f64)], window_fraction: f64) -> Result<RateFit> {
    if !(window_fraction > 0.0 && window_fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "window fraction must lie in (0, 1], got {window_fraction}"
        )));
    }
    let last = series
        .iter()
        .map(|(n, _)| *n)
        .fold(f64::NEG_INFINITY, f64::max);
    let start = last * (1.0 - window_fraction);
    let window: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|(n, _)| *n >= start)
        .collect();
    if window.len() < MIN_RATE_POINTS {
        return Err(Error::Estimation(format!(
            "rate fit needs at least {MIN_RATE_POINTS} points in the window, got {}",
            window.len()
        )));
    }
    let usable: Vec<(f64, f64)> = window
        .iter()
        .filter(|(n, m)| *n > 0.0 && *m > 0.0 && m.is_finite())
        .map(|(n, m)| (n.ln(), m.ln()))
        .collect();
    let dropped = window.len() - usable.len();
    if dropped > 0 {
        log::warn!("rate fit dropped {dropped} non-positive merit values");
    }
    if usable.len() < 2 {
        return Err(Error::Estimation(
            "no positive merit values left to fit".into(),
        ));
    }
    let k = usable.len() as f64;
    let mean_x = usable.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = usable.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = usable.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Estimation("window spans a single iteration".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        1.0
    };
    let first = window.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
        window: (first, last),
    })
}

/// Both sides of `sum_n a_n / (1 + sum_{i<=n} a_i) <= 1 + log(1 + sum_n a_n)`
/// for non-negative `a`.
pub fn log_sum_inequality(a: &[f64]) -> (f64, f64) {
    let mut partial = 0.0;
    let mut lhs = 0.0;
    for v in a {
        partial += v;
        lhs += v / (1.0 + partial);
    }
    (lhs, 1.0 + (1.0 + partial).ln())
}
