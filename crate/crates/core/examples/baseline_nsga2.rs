//! NSGA-II against random search on one instance, as hypervolume-gap traces.

use cobi::baseline::{run_nsga2_lite, run_random_search, HvReference};
use cobi::generator::{generate, ConstraintRecipe, GeneratorConfig};
use cobi::pareto::approx_ps;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = GeneratorConfig::new(5, 3);
    cfg.constraints = vec![ConstraintRecipe::Linear, ConstraintRecipe::Quadratic];
    let prob = generate(&cfg)?;
    let reference = HvReference::from_approximation(&approx_ps(&prob, 0.01)?)?;

    let budget = 5_000;
    let nsga = run_nsga2_lite(&prob, &reference, 50, budget, 1)?;
    let random = run_random_search(&prob, &reference, budget, 1, prob.search_box());
    println!("{:>6} {:>12} {:>12}", "evals", "nsga2 gap", "random gap");
    for (a, b) in nsga.trace.samples.iter().zip(&random.trace.samples) {
        println!("{:>6} {:>12.6} {:>12.6}", a.evals, a.gap, b.gap);
    }
    println!("archives: nsga2 {} points, random {} points", nsga.archive.len(), random.archive.len());
    Ok(())
}
