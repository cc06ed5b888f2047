//! Baseline optimizers and the hypervolume-gap harness.

mod nsga2;
mod random;
mod scaling;
mod trace;

pub use nsga2::run_nsga2_lite;
pub use random::run_random_search;
pub use scaling::{
    calibrate_epsilon, dimension_scaling_experiment, Calibration, DimensionReport, MeanSample, ScalingConfig,
    ScalingReport,
};
pub use trace::{checkpoints, HvReference, RunTrace, TraceSample};

use crate::archive::BiArchive;

/// A finished run: its trace and its feasible non-dominated archive.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub trace: RunTrace,
    pub archive: BiArchive,
}
