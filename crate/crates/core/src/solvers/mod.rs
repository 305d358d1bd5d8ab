//! Extra-gradient and adaptive mirror-prox iterations.

mod run;
mod state;
mod step;

pub use run::{run, Algorithm, Checkpoint, CheckpointSchedule, StepRecord, Trace};
pub use state::{adaprox_step, eg_step, SolverState, StepOutcome, StepReport, DIVERGENCE_NORM};
pub use step::{StepKind, StepPolicy};
