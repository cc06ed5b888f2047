//! Multimodal objectives and a multipeak constraint: the Pareto set is the
//! non-dominated union of the per-(peak, peak, selection) sets.

use std::collections::BTreeMap;

use cobi::generator::{generate, ConstraintRecipe, GeneratorConfig};
use cobi::pareto::approx_ps;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = GeneratorConfig::new(2, 5);
    cfg.peaks = (3, 2);
    cfg.constraints = ConstraintRecipe::parse_list("multipeak:qq")?;
    let prob = generate(&cfg)?;
    let approx = approx_ps(&prob, 0.01)?;

    println!("{} subproblems:", approx.subproblems.len());
    for s in &approx.subproblems {
        println!(
            "  f1 peak {} / f2 peak {} / selection {}: {:>4} points{}",
            s.key.peak1,
            s.key.peak2,
            s.key.selection,
            s.points,
            if s.empty { " (empty selection)" } else { "" }
        );
    }

    // Which peak pair is active along the merged front.
    let mut owners: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for x in approx.archive.points() {
        let a = prob.objective(0).active_peak(x)?;
        let b = prob.objective(1).active_peak(x)?;
        *owners.entry((a, b)).or_default() += 1;
    }
    println!("merged archive: {} points", approx.len());
    for ((a, b), count) in owners {
        println!("  active peaks ({a}, {b}): {count}");
    }
    println!("ideal {:?}\nnadir {:?}", approx.ideal, approx.nadir);
    Ok(())
}
