//! Classifies the shipped showcase instances into types I to IV.

use cobi::classify::classify;
use cobi::generator::{showcase_instance, SHOWCASE_NAMES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in SHOWCASE_NAMES {
        let prob = showcase_instance(name)?;
        let c = classify(&prob, 0.01)?;
        println!(
            "{name:<28} type {:<4} feasible unconstrained {:>4}/{:<4} max front distance {:.2e}",
            c.kind.to_string(),
            c.feasible_unconstrained,
            c.unconstrained_points,
            c.max_front_distance
        );
    }
    Ok(())
}
