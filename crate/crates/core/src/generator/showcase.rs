//! Eight hand-placed two-dimensional instances, two per constrained problem
//! type, in the order I, I, II, II, III, III, IV, IV.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::classify::ProblemType;
use crate::constraint::{Constraint, ConstraintSet, ConvexConstraint, LinearConstraint, MultipeakConstraint, QuadraticConstraint};
use crate::error::{CobiError, Result};
use crate::linalg::{spd_from_spectrum, Point, SpdMatrix};
use crate::objective::{MultipeakObjective, QuadraticPeak};
use crate::pareto::unconstrained_point;
use crate::problem::{CobiProblem, ProblemMeta, SearchBox};
use crate::transform::{MonotoneTransform, SignPreservingTransform};

pub const SHOWCASE_NAMES: [&str; 8] = [
    "type1-unimodal",
    "type1-multimodal",
    "type2-tangent",
    "type2-wedge",
    "type3-multipeak-constraint",
    "type3-multimodal",
    "type4-ball",
    "type4-multimodal",
];

pub const SHOWCASE_TYPES: [ProblemType; 8] = [
    ProblemType::I,
    ProblemType::I,
    ProblemType::II,
    ProblemType::II,
    ProblemType::III,
    ProblemType::III,
    ProblemType::IV,
    ProblemType::IV,
];

fn v(x: &[f64]) -> Point {
    DVector::from_column_slice(x)
}

fn rotation(angle: f64) -> DMatrix<f64> {
    let (s, c) = angle.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

/// Condition number 10, principal axis at 30 degrees.
fn ill_conditioned() -> SpdMatrix {
    spd_from_spectrum(&[1.0, 10.0], &rotation(PI / 6.0)).expect("valid spectrum")
}

fn peak(c: &[f64], h: SpdMatrix, offset: f64) -> QuadraticPeak {
    QuadraticPeak::quadratic(v(c), h, offset).expect("valid peak")
}

fn sphere(c: &[f64], offset: f64) -> QuadraticPeak {
    peak(c, SpdMatrix::identity(2), offset)
}

fn multi(peaks: Vec<QuadraticPeak>) -> MultipeakObjective {
    MultipeakObjective::new(peaks, MonotoneTransform::Identity).expect("distinct centers")
}

fn line(a: &[f64], b: f64) -> LinearConstraint {
    LinearConstraint::new(v(a), b).expect("non-zero normal")
}

fn ball(c: &[f64], r: f64) -> QuadraticConstraint {
    QuadraticConstraint::ball(c, r).expect("valid ball")
}

fn union(parts: Vec<ConvexConstraint>) -> Constraint {
    MultipeakConstraint::new(parts.into_iter().map(|p| (p, SignPreservingTransform::Identity)).collect())
        .expect("valid parts")
        .into()
}

fn build(name: &str, objectives: [MultipeakObjective; 2], constraints: Vec<Constraint>, anchor: &[f64]) -> CobiProblem {
    let meta = ProblemMeta { id: format!("showcase-{name}"), name: name.to_string(), seed: None };
    let cs = ConstraintSet::new(2, constraints).expect("two-dimensional constraints");
    let bx = SearchBox::cube(2, -2.0, 4.0).expect("valid box");
    CobiProblem::new(objectives, cs, v(anchor), bx, meta).expect("anchor is feasible")
}

/// Half-plane through `p` whose boundary has normal direction `dir`.
fn half_plane_through(p: &Point, dir: &Point) -> LinearConstraint {
    LinearConstraint::new(dir.clone(), -dir.dot(p)).expect("non-zero normal")
}

pub fn showcase_instance(name: &str) -> Result<CobiProblem> {
    let p = match name {
        // Constraints enclose the whole unconstrained Pareto set.
        "type1-unimodal" => build(
            name,
            [multi(vec![sphere(&[0.0, 0.0], 0.0)]), multi(vec![peak(&[1.0, 1.0], ill_conditioned(), 0.0)])],
            vec![ball(&[0.5, 0.5], 1.5).into(), line(&[1.0, 1.0], -3.0).into()],
            &[0.5, 0.5],
        ),
        "type1-multimodal" => build(
            name,
            [
                multi(vec![sphere(&[0.0, 0.0], 0.0), sphere(&[2.0, 0.5], 0.3)]),
                multi(vec![sphere(&[1.0, 1.0], 0.0), sphere(&[-0.5, 1.5], 0.4)]),
            ],
            vec![line(&[0.0, -1.0], -2.0).into(), ball(&[0.75, 0.75], 3.0).into()],
            &[0.5, 0.5],
        ),
        // The boundary is tangent to the level set of f1 at a Pareto-optimal
        // point; everything cut off projects onto that point.
        "type2-tangent" => {
            let f1 = sphere(&[0.0, 0.0], 0.0);
            let f2 = peak(&[1.0, 1.0], SpdMatrix::diagonal(&[1.0, 4.0]).expect("positive"), 0.0);
            let p = unconstrained_point(&f1, &f2, 0.5);
            let grad = f1.gradient(&p);
            build(name, [multi(vec![f1]), multi(vec![f2])], vec![half_plane_through(&p, &grad).into()], &[0.0, 0.0])
        }
        // Two boundaries meet at a Pareto-optimal point, 30 degrees either side
        // of the f1 gradient there.
        "type2-wedge" => {
            let f1 = sphere(&[0.0, 0.0], 0.0);
            let f2 = peak(&[1.5, 0.5], ill_conditioned(), 0.0);
            let p = unconstrained_point(&f1, &f2, 0.4);
            let grad = f1.gradient(&p);
            let n1 = rotation(PI / 6.0) * &grad;
            let n2 = rotation(-PI / 6.0) * &grad;
            build(
                name,
                [multi(vec![f1]), multi(vec![f2])],
                vec![half_plane_through(&p, &n1).into(), half_plane_through(&p, &n2).into()],
                &[0.0, 0.0],
            )
        }
        // Two disjoint balls cover the ends of the Pareto set; the middle is
        // pushed onto their boundaries.
        "type3-multipeak-constraint" => build(
            name,
            [multi(vec![sphere(&[0.0, 0.0], 0.0)]), multi(vec![peak(&[1.5, 1.0], ill_conditioned(), 0.0)])],
            vec![union(vec![ball(&[0.0, 0.0], 0.6).into(), ball(&[1.6, 1.0], 0.5).into()])],
            &[0.0, 0.0],
        ),
        "type3-multimodal" => build(
            name,
            [
                multi(vec![sphere(&[0.0, 0.0], 0.0), sphere(&[2.5, 0.0], 0.2)]),
                multi(vec![sphere(&[1.2, 1.0], 0.0)]),
            ],
            vec![line(&[-0.5, 1.0], -0.2).into()],
            &[0.0, -0.5],
        ),
        "type4-ball" => build(
            name,
            [multi(vec![sphere(&[0.0, 0.0], 0.0)]), multi(vec![peak(&[1.0, 1.0], ill_conditioned(), 0.0)])],
            vec![ball(&[2.0, -1.5], 1.0).into()],
            &[2.0, -1.5],
        ),
        "type4-multimodal" => build(
            name,
            [
                multi(vec![sphere(&[0.0, 0.0], 0.0), sphere(&[2.0, 0.0], 0.1)]),
                multi(vec![sphere(&[1.0, 1.0], 0.0), sphere(&[3.0, 1.0], 0.2)]),
            ],
            vec![union(vec![ball(&[-1.0, 2.5], 0.8).into(), ball(&[3.0, -1.5], 0.8).into()])],
            &[-1.0, 2.5],
        ),
        other => {
            return Err(CobiError::InvalidArgument(format!(
                "unknown showcase instance `{other}` (available: {})",
                SHOWCASE_NAMES.join(", ")
            )))
        }
    };
    Ok(p)
}

/// All eight instances in type order.
pub fn showcase() -> Vec<CobiProblem> {
    SHOWCASE_NAMES.iter().map(|n| showcase_instance(n).expect("built-in instance")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;

    #[test]
    fn types_match() {
        for (p, want) in showcase().iter().zip(SHOWCASE_TYPES) {
            let c = classify(p, 0.01).unwrap();
            assert_eq!(c.kind, want, "{}: {c:?}", p.meta.name);
        }
    }

    #[test]
    fn unknown_name() {
        assert!(showcase_instance("type5").is_err());
    }
}
