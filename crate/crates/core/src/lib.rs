//! Solvers for monotone variational inequalities and min-max games.
//!
//! The crate is organized around four pieces:
//!
//! - [`geometry`]: Finsler local norms, Bregman regularizers and their
//!   prox-mappings (Euclidean and inverse-barrier instantiations).
//! - [`problems`]: bilinear games, a discontinuous sign field, Kleinrock
//!   resource allocation in load and transformed coordinates, and a
//!   covariance-learning game, plus noisy oracles.
//! - [`solvers`]: extra-gradient with constant, `1/sqrt(n)` or adaptive steps,
//!   and AdaProx, the adaptive mirror-prox method whose step
//!   `1/sqrt(1 + sum delta_k^2)` is driven by successive signal differences
//!   measured in the dual local norm.
//! - [`merit`]: restricted gap, Wardrop residual, gradient norm and log-log
//!   rate fits.
//!
//! ```
//! use adaprox::prelude::*;
//!
//! let problem = make_bilinear(2, 1, vec![0.1, -0.2], vec![0.3, 0.0], 1.0).unwrap();
//! let geometry = MirrorGeometry::euclidean(problem.domain.clone()).unwrap();
//! let mut oracle = &problem;
//! let trace = run(
//!     &mut oracle,
//!     &Algorithm::AdaProx(geometry),
//!     problem.domain.center(),
//!     2000,
//!     CheckpointSchedule::default(),
//! )
//! .unwrap();
//! let x_star = problem.known_solution.as_ref().unwrap();
//! let last = &trace.final_state.x;
//! assert!(adaprox::vecops::dist2(last, x_star) < 1e-3);
//! ```

pub mod error;
pub mod geometry;
pub mod merit;
pub mod problems;
pub mod solvers;
pub mod vecops;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::geometry::{
        BregmanFunction, BregmanKind, DomainKind, DomainSpec, FinslerMetric, MetricKind,
        MirrorGeometry,
    };
    pub use crate::merit::{
        bregman_depth, fit_rate, grad_norm_sq, restricted_gap, wardrop_residual, RateFit,
        SearchBudget, TestDomain,
    };
    pub use crate::problems::{
        covariance_problem, make_bilinear, make_bilinear_random_saddle, make_bilinear_with_matrix,
        make_covariance_game, make_resource_allocation, make_sign_field,
        to_transformed_coordinates, NoiseModel, Oracle, Regularity, StochasticOracle, VIProblem,
    };
    pub use crate::solvers::{
        adaprox_step, eg_step, run, Algorithm, CheckpointSchedule, SolverState, StepKind,
        StepOutcome, StepPolicy, Trace,
    };
}
