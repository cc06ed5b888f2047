//! Constrained minimizers of weighted sums are projections of the
//! unconstrained minimizer in the metric of the weighted Hessian.

use cobi::constraint::{ConvexConstraint, ConvexSelection, LinearConstraint, QuadraticConstraint};
use cobi::linalg::{Point, SpdMatrix};
use cobi::objective::QuadraticPeak;
use cobi::projection::{build_scalarized, kkt_report, project};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p1 = QuadraticPeak::quadratic(Point::from_vec(vec![0.0, 0.0]), SpdMatrix::diagonal(&[4.0, 1.0])?, 0.0)?;
    let p2 = QuadraticPeak::sphere(&[2.0, 1.0]);
    let half_plane = ConvexConstraint::Linear(LinearConstraint::new(Point::from_vec(vec![1.0, 1.0]), -1.0)?);
    let ball = ConvexConstraint::Quadratic(QuadraticConstraint::ball(&[0.5, 0.0], 0.8)?);

    for (name, sel) in [
        ("half-plane x1 + x2 <= 1", ConvexSelection::new(2, vec![half_plane.clone()])?),
        ("ball around (0.5, 0)", ConvexSelection::new(2, vec![ball.clone()])?),
        ("both", ConvexSelection::new(2, vec![half_plane, ball])?),
    ] {
        println!("{name}");
        for theta in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let sp = build_scalarized(&p1, &p2, theta, &sel)?;
            let r = project(&sp);
            let kkt = kkt_report(&sp, &r.x_star);
            println!(
                "  θ = {theta:.2}  c = ({:+.4}, {:+.4})  x* = ({:+.4}, {:+.4})  active {:?}  μ {:?}  kkt {:.1e}  {:?}",
                sp.center()[0],
                sp.center()[1],
                r.x_star[0],
                r.x_star[1],
                r.active_set,
                r.multipliers.iter().map(|m| (m * 1e6).round() / 1e6).collect::<Vec<_>>(),
                kkt.residual,
                r.status
            );
        }
    }
    Ok(())
}
