//! Draws a seeded random instance and prints its instance document.

use cobi::generator::{generate, save, ConstraintRecipe, GeneratorConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = GeneratorConfig::new(3, 7);
    cfg.peaks = (2, 1);
    cfg.constraints = ConstraintRecipe::parse_list("linear,quadratic,multipeak:lq")?;
    cfg.kappa = (1.0, 100.0);
    let prob = generate(&cfg)?;
    eprintln!(
        "{}: n = {}, {} + {} peaks, {} constraints, {} convex selections",
        prob.meta.id,
        prob.dim(),
        prob.objective(0).peaks().len(),
        prob.objective(1).peaks().len(),
        prob.constraints().len(),
        prob.constraints().selection_count()
    );
    for (i, obj) in prob.objectives().iter().enumerate() {
        for (j, p) in obj.peaks().iter().enumerate() {
            eprintln!("  f{} peak {j}: condition number {:.2}", i + 1, p.hessian().condition_number());
        }
    }
    print!("{}", save(&prob).with_config(cfg).to_json());
    Ok(())
}
