//! Reference approximations of the constrained Pareto set and front.

mod approx;
mod export;
mod extremes;
mod weights;

pub use approx::{
    approx_ps, approx_ps_singlepeak, compute_extremes, subproblem_keys, ParetoApproximation,
    SinglePeakRun, SubproblemKey, SubproblemReport, DUPLICATE_TOL,
};
pub use export::{read_reference_csv, reference_csv, write_reference_csv, RunSummary};
pub use extremes::{ideal_nadir, Extremes, SubproblemExtreme};
pub use weights::{epsilon_weights, unconstrained_point, WeightSchedule};

#[cfg(test)]
mod tests;
