//! Type I–IV taxonomy: how the constraints change the Pareto front.

use std::fmt;

use serde::Serialize;

use crate::constraint::FEASIBILITY_TOL;
use crate::dominance::ObjectivePair;
use crate::error::{CobiError, Result};
use crate::pareto::{approx_ps, ParetoApproximation};
use crate::problem::CobiProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProblemType {
    /// No unconstrained Pareto-optimal point is cut off.
    I,
    /// The front shrinks to a subset of the unconstrained front.
    II,
    /// Part of the unconstrained front survives and new points appear.
    III,
    /// Every unconstrained Pareto-optimal point is infeasible.
    IV,
}

impl fmt::Display for ProblemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProblemType::I => "I",
            ProblemType::II => "II",
            ProblemType::III => "III",
            ProblemType::IV => "IV",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub kind: ProblemType,
    pub feasible_unconstrained: usize,
    pub unconstrained_points: usize,
    /// Largest front-space distance from a constrained front point to the
    /// unconstrained front.
    pub max_front_distance: f64,
    pub tolerance: f64,
}

fn segment_distance(p: ObjectivePair, a: ObjectivePair, b: ObjectivePair) -> f64 {
    let (dx, dy) = (b.f1 - a.f1, b.f2 - a.f2);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p.f1 - a.f1) * dx + (p.f2 - a.f2) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    let (qx, qy) = (a.f1 + t * dx, a.f2 + t * dy);
    ((p.f1 - qx).powi(2) + (p.f2 - qy).powi(2)).sqrt()
}

/// Distance from `p` to the unconstrained front, read as a polyline through
/// consecutive archive points that lie on the same branch (decision-space
/// distance at most `1.5 ε`).
fn front_distance(p: ObjectivePair, front: &ParetoApproximation) -> f64 {
    let entries = front.archive.entries();
    let link = 1.5 * front.epsilon;
    let mut best = f64::INFINITY;
    for (i, e) in entries.iter().enumerate() {
        best = best.min(segment_distance(p, e.f, e.f));
        if let Some(next) = entries.get(i + 1) {
            let joined = match (&e.x, &next.x) {
                (Some(x), Some(y)) => (x - y).norm() <= link,
                _ => false,
            };
            if joined {
                best = best.min(segment_distance(p, e.f, next.f));
            }
        }
    }
    best
}

/// Classifies from precomputed approximations of the unconstrained and the
/// constrained problem, built with the same ε.
pub fn classify_type(
    prob: &CobiProblem,
    unconstrained: &ParetoApproximation,
    constrained: &ParetoApproximation,
    tol: f64,
) -> Result<Classification> {
    if unconstrained.archive.is_empty() || constrained.archive.is_empty() {
        return Err(CobiError::Classification("empty Pareto set approximation".into()));
    }
    let mut feasible = 0;
    for x in unconstrained.archive.points() {
        if prob.total_violation(x)? <= FEASIBILITY_TOL {
            feasible += 1;
        }
    }
    let total = unconstrained.archive.len();
    let max_front_distance = constrained
        .archive
        .objectives()
        .into_iter()
        .map(|f| front_distance(f, unconstrained))
        .fold(0.0, f64::max);
    let kind = if feasible == total {
        ProblemType::I
    } else if feasible == 0 {
        ProblemType::IV
    } else if max_front_distance <= tol {
        ProblemType::II
    } else {
        ProblemType::III
    };
    Ok(Classification { kind, feasible_unconstrained: feasible, unconstrained_points: total, max_front_distance, tolerance: tol })
}

/// Builds both approximations with `epsilon` and classifies with tolerance
/// `max(1e-6, ε)`.
pub fn classify(prob: &CobiProblem, epsilon: f64) -> Result<Classification> {
    let free = approx_ps(&prob.without_constraints(), epsilon)?;
    let constrained = approx_ps(prob, epsilon)?;
    classify_type(prob, &free, &constrained, epsilon.max(1e-6))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::{ConstraintSet, LinearConstraint};
    use crate::objective::{MultipeakObjective, QuadraticPeak};
    use crate::problem::{point, ProblemMeta, SearchBox};

    fn with_line(a: &[f64], b: f64, anchor: &[f64]) -> CobiProblem {
        with_line_to(1.0, a, b, anchor)
    }

    fn with_line_to(end: f64, a: &[f64], b: f64, anchor: &[f64]) -> CobiProblem {
        let objs = [
            MultipeakObjective::single(QuadraticPeak::sphere(&[0.0, 0.0])),
            MultipeakObjective::single(QuadraticPeak::sphere(&[end, 0.0])),
        ];
        let cs = ConstraintSet::new(2, vec![LinearConstraint::new(point(a), b).unwrap().into()]).unwrap();
        CobiProblem::new(objs, cs, point(anchor), SearchBox::cube(2, -3.0, 4.0).unwrap(), ProblemMeta::default()).unwrap()
    }

    #[test]
    fn unconstrained_is_type_one() {
        let p = with_line(&[1.0, 0.0], -10.0, &[0.0, 0.0]);
        assert_eq!(classify(&p, 0.05).unwrap().kind, ProblemType::I);
        assert_eq!(classify(&p.without_constraints(), 0.05).unwrap().kind, ProblemType::I);
    }

    #[test]
    fn segment_cut_off_is_type_four() {
        let p = with_line(&[-1.0, 0.0], 2.0, &[2.5, 0.0]);
        assert_eq!(classify(&p, 0.05).unwrap().kind, ProblemType::IV);
    }

    #[test]
    fn tangent_half_plane_is_type_two() {
        // The cut-off half of the segment projects onto (0.5, 0), which is
        // itself Pareto optimal.
        let p = with_line(&[1.0, 0.0], -0.5, &[0.0, 0.0]);
        let c = classify(&p, 0.05).unwrap();
        assert_eq!(c.kind, ProblemType::II, "{c:?}");
    }

    #[test]
    fn oblique_half_plane_is_type_three() {
        let p = with_line_to(4.0, &[1.0, -1.0], -2.0, &[0.0, 0.0]);
        let c = classify(&p, 0.05).unwrap();
        assert_eq!(c.kind, ProblemType::III, "{c:?}");
    }

    #[test]
    fn display() {
        assert_eq!(ProblemType::III.to_string(), "III");
    }
}
