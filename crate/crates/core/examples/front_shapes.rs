//! Objective-space fronts of the showcase instances, constrained against
//! unconstrained, as CSV (`instance,kind,f1,f2`) for plotting.

use cobi::generator::{showcase_instance, SHOWCASE_NAMES};
use cobi::pareto::approx_ps;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("instance,kind,f1,f2");
    for name in SHOWCASE_NAMES {
        let prob = showcase_instance(name)?;
        let free = prob.without_constraints();
        for (kind, p) in [("unconstrained", &free), ("constrained", &prob)] {
            let approx = approx_ps(p, 0.02)?;
            for f in approx.archive.objectives() {
                println!("{name},{kind},{:.10},{:.10}", f.f1, f.f2);
            }
        }
    }
    Ok(())
}
