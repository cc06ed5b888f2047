//! Ideal and nadir points from the per-subproblem extreme solutions, checked
//! against the extent of a dense reference archive.

use cobi::generator::{generate, ConstraintRecipe, GeneratorConfig};
use cobi::pareto::{approx_ps, compute_extremes};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (peaks, recipe) in [((1, 1), "linear"), ((2, 2), "quadratic"), ((3, 1), "multipeak:lq")] {
        let mut cfg = GeneratorConfig::new(4, 21);
        cfg.peaks = peaks;
        cfg.constraints = ConstraintRecipe::parse_list(recipe)?;
        let prob = generate(&cfg)?;
        let e = compute_extremes(&prob)?;
        let approx = approx_ps(&prob, 0.005)?;
        let (lo, hi) = (approx.archive.ideal().unwrap(), approx.archive.nadir().unwrap());
        println!("{}", prob.meta.id);
        println!("  endpoints: ideal ({:.6}, {:.6})  nadir ({:.6}, {:.6})", e.ideal.f1, e.ideal.f2, e.nadir.f1, e.nadir.f2);
        println!("  archive:   ideal ({:.6}, {:.6})  nadir ({:.6}, {:.6})", lo.f1, lo.f2, hi.f1, hi.f2);
    }
    Ok(())
}
