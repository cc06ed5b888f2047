//! Evaluates a few points of a showcase instance, with and without transforms.

use cobi::generator::showcase_instance;
use cobi::linalg::Point;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let prob = showcase_instance("type3-multipeak-constraint")?;
    let anchor = prob.anchor().clone();
    let points = [anchor, Point::from_vec(vec![0.5, 0.5]), Point::from_vec(vec![3.0, -2.0])];
    for x in &points {
        let e = prob.evaluate(x)?;
        println!(
            "x = {:?}\n  f = ({:.6}, {:.6})  g = {:?}  violation = {:.3e}  feasible = {}",
            x.as_slice(),
            e.f.f1,
            e.f.f2,
            e.g,
            e.violation,
            e.feasible
        );
    }
    Ok(())
}
