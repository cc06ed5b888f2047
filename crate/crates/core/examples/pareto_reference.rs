//! Reference Pareto set of a constrained single-peak instance, written as CSV.
//! Usage: pareto_reference [epsilon] [out.csv]

use cobi::generator::{generate, ConstraintRecipe, GeneratorConfig};
use cobi::pareto::{approx_ps, reference_csv, RunSummary};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let eps: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.02);
    let out = args.next();

    let mut cfg = GeneratorConfig::new(5, 11);
    cfg.constraints = vec![ConstraintRecipe::Linear, ConstraintRecipe::Quadratic];
    let prob = generate(&cfg)?;
    let approx = approx_ps(&prob, eps)?;
    eprintln!("{}", RunSummary::new(&prob.meta.id, &approx).to_json());

    let csv = reference_csv(&approx.archive, prob.dim());
    match out {
        Some(path) => std::fs::write(path, csv)?,
        None => {
            for line in csv.lines().take(6) {
                println!("{line}");
            }
            println!("... {} rows", approx.len());
        }
    }
    Ok(())
}
