pub mod archive;
pub mod constraint;
pub mod dominance;
pub mod error;
pub mod hypervolume;
pub mod linalg;
pub mod objective;
pub mod problem;
pub mod projection;
pub mod transform;
pub mod parallel;
pub mod pareto;
pub mod classify;
pub mod generator;
pub mod baseline;
pub mod cli;
