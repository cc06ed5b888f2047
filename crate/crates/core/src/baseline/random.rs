use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::trace::{HvReference, Recorder};
use super::RunResult;
use crate::problem::{CobiProblem, SearchBox};

/// Uniform sampling in `sample_box`, keeping feasible non-dominated points.
pub fn run_random_search(
    prob: &CobiProblem,
    reference: &HvReference,
    budget: usize,
    seed: u64,
    sample_box: &SearchBox,
) -> RunResult {
    let budget = budget.max(1);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut rec = Recorder::new(prob, reference, budget);
    let n = sample_box.dim();
    for _ in 0..budget {
        let x = DVector::from_fn(n, |i, _| rng.random_range(sample_box.lower[i]..=sample_box.upper[i]));
        rec.evaluate(&x);
    }
    let (trace, archive) = rec.finish("random", seed, budget);
    RunResult { trace, archive }
}
