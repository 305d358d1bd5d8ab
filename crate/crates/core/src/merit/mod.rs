//! Solution-quality measures and empirical rate estimation.

mod gap;
mod rate;
mod sampling;
mod wardrop;

pub use gap::{
    bregman_depth, bregman_depth_grid, grad_norm_sq, restricted_gap, restricted_gap_grid,
    TestDomain, TestDomainKind, NEIGHBORHOOD_FRACTION,
};
pub use rate::{fit_rate, log_sum_inequality, RateFit, MIN_RATE_POINTS};
pub use sampling::{KroneckerSequence, SearchBudget};
pub use wardrop::{wardrop_residual, LOADED_FRACTION};
