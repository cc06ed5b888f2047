use serde::Serialize;

use super::approx::SubproblemKey;
use crate::dominance::ObjectivePair;
use crate::error::{CobiError, Result};
use crate::linalg::Point;
use crate::problem::CobiProblem;

/// Constrained minimizers of the two objectives for one subproblem; `None`
/// where the projection failed or the selection is empty.
#[derive(Clone, Debug)]
pub struct SubproblemExtreme {
    pub key: SubproblemKey,
    pub best_f1: Option<Point>,
    pub best_f2: Option<Point>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Extremes {
    pub ideal: ObjectivePair,
    pub nadir: ObjectivePair,
    /// Minimizer of `f1` (ties resolved toward smaller `f2`).
    pub x1: Vec<f64>,
    /// Minimizer of `f2` (ties resolved toward smaller `f1`).
    pub x2: Vec<f64>,
    /// Keys lacking one of the extremes.
    pub excluded: Vec<SubproblemKey>,
}

fn better(primary: f64, secondary: f64, best: Option<(f64, f64)>) -> bool {
    match best {
        None => true,
        Some((p, s)) => {
            let tie = (primary - p).abs() <= 1e-12 * primary.abs().max(p.abs()).max(1.0);
            if tie {
                secondary < s
            } else {
                primary < p
            }
        }
    }
}

/// Ideal point as the componentwise minimum over subproblem extremes and
/// nadir as `(f1(x2), f2(x1))`, with objectives evaluated on the full problem.
pub fn ideal_nadir(prob: &CobiProblem, per_subproblem: &[SubproblemExtreme]) -> Result<Extremes> {
    let mut excluded = Vec::new();
    let mut best1: Option<(f64, f64)> = None;
    let mut best2: Option<(f64, f64)> = None;
    let mut x1: Option<&Point> = None;
    let mut x2: Option<&Point> = None;
    for e in per_subproblem {
        let (Some(p1), Some(p2)) = (&e.best_f1, &e.best_f2) else {
            excluded.push(e.key);
            continue;
        };
        let f = prob.ranking_objectives(p1)?;
        if better(f.f1, f.f2, best1) {
            best1 = Some((f.f1, f.f2));
            x1 = Some(p1);
        }
        let f = prob.ranking_objectives(p2)?;
        if better(f.f2, f.f1, best2) {
            best2 = Some((f.f2, f.f1));
            x2 = Some(p2);
        }
    }
    let (Some((f1_min, f2_at_x1)), Some((f2_min, f1_at_x2))) = (best1, best2) else {
        return Err(CobiError::IdealNadir("every subproblem lacks a constrained extreme".into()));
    };
    Ok(Extremes {
        ideal: ObjectivePair::new(f1_min, f2_min),
        nadir: ObjectivePair::new(f1_at_x2, f2_at_x1),
        x1: x1.unwrap().iter().copied().collect(),
        x2: x2.unwrap().iter().copied().collect(),
        excluded,
    })
}
