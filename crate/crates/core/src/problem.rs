//! The assembled constrained bi-objective problem.

use serde::Serialize;

use crate::constraint::{ConstraintSet, FEASIBILITY_TOL};
use crate::dominance::ObjectivePair;
use crate::error::{check_dim, CobiError, Result};
use crate::linalg::Point;
use crate::objective::MultipeakObjective;

/// Axis-aligned box used for sampling, grids and plotting.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl SearchBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        check_dim(lower.len(), upper.len())?;
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !(l < u) || !l.is_finite() || !u.is_finite() {
                return Err(CobiError::InvalidArgument(format!("box side {i} is degenerate: [{l}, {u}]")));
            }
        }
        Ok(SearchBox { lower, upper })
    }

    pub fn cube(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; n], vec![hi; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn diameter(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(l, u)| (u - l) * (u - l)).sum::<f64>().sqrt()
    }

    pub fn contains(&self, x: &Point) -> bool {
        x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (l, u))| *v >= *l && *v <= *u)
    }

    pub fn clamp(&self, x: &mut Point) {
        for (i, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lower[i], self.upper[i]);
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProblemMeta {
    pub id: String,
    pub name: String,
    pub seed: Option<u64>,
}

/// Everything returned by a single evaluation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    /// Objectives with all transforms applied.
    pub f: ObjectivePair,
    /// Objectives without transforms.
    pub f_raw: ObjectivePair,
    /// Transformed constraint values `τ_k(g_k(x))`.
    pub g: Vec<f64>,
    pub g_raw: Vec<f64>,
    pub violation: f64,
    pub feasible: bool,
}

#[derive(Clone, Debug)]
pub struct CobiProblem {
    dim: usize,
    objectives: [MultipeakObjective; 2],
    constraints: ConstraintSet,
    anchor: Point,
    search_box: SearchBox,
    pub meta: ProblemMeta,
}

impl CobiProblem {
    /// Validates dimensions and that the anchor is feasible.
    pub fn new(
        objectives: [MultipeakObjective; 2],
        constraints: ConstraintSet,
        anchor: Point,
        search_box: SearchBox,
        meta: ProblemMeta,
    ) -> Result<Self> {
        let dim = objectives[0].dim();
        check_dim(dim, objectives[1].dim())?;
        check_dim(dim, constraints.dim())?;
        check_dim(dim, anchor.len())?;
        check_dim(dim, search_box.dim())?;
        if anchor.iter().any(|v| !v.is_finite()) {
            return Err(CobiError::NonFinite("anchor".into()));
        }
        let feas = constraints.is_feasible(&anchor, FEASIBILITY_TOL)?;
        if !feas.feasible {
            return Err(CobiError::validation(
                "anchor",
                format!("violates the constraints by {:e}", feas.total_violation),
            ));
        }
        Ok(CobiProblem { dim, objectives, constraints, anchor, search_box, meta })
    }

    /// Unconstrained problem anchored at the first peak of `f1`, with a box
    /// spanning all peak centers.
    pub fn unconstrained(objectives: [MultipeakObjective; 2], meta: ProblemMeta) -> Result<Self> {
        let dim = objectives[0].dim();
        let anchor = objectives[0].peaks()[0].center().clone();
        let search_box = bounding_box(&objectives, 1.0);
        Self::new(objectives, ConstraintSet::empty(dim), anchor, search_box, meta)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn objectives(&self) -> &[MultipeakObjective; 2] {
        &self.objectives
    }

    pub fn objective(&self, i: usize) -> &MultipeakObjective {
        &self.objectives[i]
    }

    pub fn constraints(&self) -> &ConstraintSet {
        &self.constraints
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn search_box(&self) -> &SearchBox {
        &self.search_box
    }

    /// Same objectives, no constraints.
    pub fn without_constraints(&self) -> CobiProblem {
        CobiProblem {
            dim: self.dim,
            objectives: self.objectives.clone(),
            constraints: ConstraintSet::empty(self.dim),
            anchor: self.anchor.clone(),
            search_box: self.search_box.clone(),
            meta: self.meta.clone(),
        }
    }

    pub fn with_objectives(&self, objectives: [MultipeakObjective; 2]) -> Result<CobiProblem> {
        CobiProblem::new(objectives, self.constraints.clone(), self.anchor.clone(), self.search_box.clone(), self.meta.clone())
    }

    pub fn with_constraints(&self, constraints: ConstraintSet) -> Result<CobiProblem> {
        CobiProblem::new(self.objectives.clone(), constraints, self.anchor.clone(), self.search_box.clone(), self.meta.clone())
    }

    pub fn evaluate(&self, x: &Point) -> Result<Evaluation> {
        check_dim(self.dim, x.len())?;
        let f = ObjectivePair::new(self.objectives[0].value(x, true)?, self.objectives[1].value(x, true)?);
        let f_raw = self.raw_objectives(x)?;
        let g = self.constraints.values(x, true)?;
        let g_raw = self.constraints.values(x, false)?;
        let violation: f64 = g_raw.iter().map(|v| v.max(0.0)).sum();
        Ok(Evaluation { f, f_raw, g, g_raw, violation, feasible: violation <= FEASIBILITY_TOL })
    }

    pub fn raw_objectives(&self, x: &Point) -> Result<ObjectivePair> {
        Ok(ObjectivePair::new(self.objectives[0].value(x, false)?, self.objectives[1].value(x, false)?))
    }

    /// Objectives up to their outer transforms; the values Pareto filtering uses.
    pub fn ranking_objectives(&self, x: &Point) -> Result<ObjectivePair> {
        Ok(ObjectivePair::new(self.objectives[0].ranking_value(x)?, self.objectives[1].ranking_value(x)?))
    }

    pub fn total_violation(&self, x: &Point) -> Result<f64> {
        self.constraints.total_violation(x)
    }
}

/// Box around every peak center, padded by `pad` times the largest extent (at least 1).
pub fn bounding_box(objectives: &[MultipeakObjective; 2], pad: f64) -> SearchBox {
    let n = objectives[0].dim();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for obj in objectives {
        for p in obj.peaks() {
            for i in 0..n {
                lo[i] = lo[i].min(p.center()[i]);
                hi[i] = hi[i].max(p.center()[i]);
            }
        }
    }
    let extent = lo.iter().zip(&hi).map(|(l, h)| h - l).fold(1.0, f64::max);
    SearchBox {
        lower: lo.iter().map(|l| l - pad * extent).collect(),
        upper: hi.iter().map(|h| h + pad * extent).collect(),
    }
}

#[cfg(test)]
pub(crate) fn point(v: &[f64]) -> Point {
    nalgebra::DVector::from_column_slice(v)
}
