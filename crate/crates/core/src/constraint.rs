//! Linear, convex-quadratic and multipeak (min-composed) inequality constraints.

use nalgebra::DVector;

use crate::error::{check_dim, CobiError, Result};
use crate::linalg::{Point, SpdMatrix};
use crate::transform::SignPreservingTransform;

/// Default tolerance on the summed violation for a point to count as feasible.
pub const FEASIBILITY_TOL: f64 = 1e-8;

/// `aᵀ x + b <= 0`.
#[derive(Clone, Debug)]
pub struct LinearConstraint {
    normal: DVector<f64>,
    intercept: f64,
}

impl LinearConstraint {
    pub fn new(normal: DVector<f64>, intercept: f64) -> Result<Self> {
        if normal.iter().any(|v| !v.is_finite()) || !intercept.is_finite() {
            return Err(CobiError::NonFinite("linear constraint".into()));
        }
        if normal.norm() <= 1e-12 {
            return Err(CobiError::InvalidArgument("linear constraint normal is zero".into()));
        }
        Ok(LinearConstraint { normal, intercept })
    }

    pub fn normal(&self) -> &DVector<f64> {
        &self.normal
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn value(&self, x: &Point) -> f64 {
        self.normal.dot(x) + self.intercept
    }
}

/// `½ (x − c)ᵀ H (x − c) − d <= 0` with `d >= 0`.
#[derive(Clone, Debug)]
pub struct QuadraticConstraint {
    center: Point,
    hessian: SpdMatrix,
    level: f64,
}

impl QuadraticConstraint {
    pub fn new(center: Point, hessian: SpdMatrix, level: f64) -> Result<Self> {
        check_dim(hessian.dim(), center.len())?;
        if center.iter().any(|v| !v.is_finite()) || !level.is_finite() {
            return Err(CobiError::NonFinite("quadratic constraint".into()));
        }
        if level < 0.0 {
            return Err(CobiError::InvalidArgument(format!("quadratic constraint level must be >= 0, got {level}")));
        }
        Ok(QuadraticConstraint { center, hessian, level })
    }

    /// The ball `|x − c| <= radius`.
    pub fn ball(center: &[f64], radius: f64) -> Result<Self> {
        let n = center.len();
        Self::new(DVector::from_column_slice(center), SpdMatrix::identity(n), 0.5 * radius * radius)
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn hessian(&self) -> &SpdMatrix {
        &self.hessian
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn value(&self, x: &Point) -> f64 {
        0.5 * self.hessian.quad_form(&(x - &self.center)) - self.level
    }
}

/// A linear or convex-quadratic constraint.
#[derive(Clone, Debug)]
pub enum ConvexConstraint {
    Linear(LinearConstraint),
    Quadratic(QuadraticConstraint),
}

impl ConvexConstraint {
    pub fn dim(&self) -> usize {
        match self {
            ConvexConstraint::Linear(c) => c.normal.len(),
            ConvexConstraint::Quadratic(c) => c.center.len(),
        }
    }

    pub fn value(&self, x: &Point) -> f64 {
        match self {
            ConvexConstraint::Linear(c) => c.value(x),
            ConvexConstraint::Quadratic(c) => c.value(x),
        }
    }

    pub fn gradient(&self, x: &Point) -> DVector<f64> {
        match self {
            ConvexConstraint::Linear(c) => c.normal.clone(),
            ConvexConstraint::Quadratic(c) => c.hessian.mul_vec(&(x - &c.center)),
        }
    }

    /// Constant Hessian of a quadratic constraint, `None` for linear ones.
    pub fn hessian(&self) -> Option<&SpdMatrix> {
        match self {
            ConvexConstraint::Linear(_) => None,
            ConvexConstraint::Quadratic(c) => Some(&c.hessian),
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, ConvexConstraint::Linear(_))
    }
}

impl From<LinearConstraint> for ConvexConstraint {
    fn from(c: LinearConstraint) -> Self {
        ConvexConstraint::Linear(c)
    }
}

impl From<QuadraticConstraint> for ConvexConstraint {
    fn from(c: QuadraticConstraint) -> Self {
        ConvexConstraint::Quadratic(c)
    }
}

/// `min_u τ_u(g_u(x)) <= 0`: feasible on the union of the parts' feasible sets.
#[derive(Clone, Debug)]
pub struct MultipeakConstraint {
    parts: Vec<(ConvexConstraint, SignPreservingTransform)>,
}

impl MultipeakConstraint {
    pub fn new(parts: Vec<(ConvexConstraint, SignPreservingTransform)>) -> Result<Self> {
        let Some((first, _)) = parts.first() else {
            return Err(CobiError::InvalidArgument("multipeak constraint needs at least one part".into()));
        };
        let n = first.dim();
        for (p, t) in &parts {
            check_dim(n, p.dim())?;
            t.validate()?;
        }
        Ok(MultipeakConstraint { parts })
    }

    pub fn parts(&self) -> &[(ConvexConstraint, SignPreservingTransform)] {
        &self.parts
    }

    pub fn raw_value(&self, x: &Point) -> f64 {
        self.parts.iter().map(|(p, _)| p.value(x)).fold(f64::INFINITY, f64::min)
    }

    pub fn transformed_value(&self, x: &Point) -> f64 {
        self.parts.iter().map(|(p, t)| t.apply(p.value(x))).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Debug)]
pub enum ConstraintKind {
    Convex(ConvexConstraint),
    Multipeak(MultipeakConstraint),
}

/// One inequality `τ(g(x)) <= 0`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub transform: SignPreservingTransform,
}

impl Constraint {
    pub fn new(kind: ConstraintKind, transform: SignPreservingTransform) -> Result<Self> {
        transform.validate()?;
        Ok(Constraint { kind, transform })
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ConstraintKind::Convex(c) => c.dim(),
            ConstraintKind::Multipeak(m) => m.parts[0].0.dim(),
        }
    }

    pub fn raw_value(&self, x: &Point) -> f64 {
        match &self.kind {
            ConstraintKind::Convex(c) => c.value(x),
            ConstraintKind::Multipeak(m) => m.raw_value(x),
        }
    }

    pub fn transformed_value(&self, x: &Point) -> f64 {
        let g = match &self.kind {
            ConstraintKind::Convex(c) => c.value(x),
            ConstraintKind::Multipeak(m) => m.transformed_value(x),
        };
        self.transform.apply(g)
    }
}

impl From<LinearConstraint> for Constraint {
    fn from(c: LinearConstraint) -> Self {
        Constraint { kind: ConstraintKind::Convex(c.into()), transform: SignPreservingTransform::Identity }
    }
}

impl From<QuadraticConstraint> for Constraint {
    fn from(c: QuadraticConstraint) -> Self {
        Constraint { kind: ConstraintKind::Convex(c.into()), transform: SignPreservingTransform::Identity }
    }
}

impl From<MultipeakConstraint> for Constraint {
    fn from(c: MultipeakConstraint) -> Self {
        Constraint { kind: ConstraintKind::Multipeak(c), transform: SignPreservingTransform::Identity }
    }
}

/// Feasibility verdict on raw constraint values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    /// `Σ_k max(0, g_k(x))`.
    pub total_violation: f64,
}

#[derive(Clone, Debug)]
pub struct ConstraintSet {
    dim: usize,
    constraints: Vec<Constraint>,
}

impl ConstraintSet {
    pub fn new(dim: usize, constraints: Vec<Constraint>) -> Result<Self> {
        for c in &constraints {
            check_dim(dim, c.dim())?;
        }
        Ok(ConstraintSet { dim, constraints })
    }

    pub fn empty(dim: usize) -> Self {
        ConstraintSet { dim, constraints: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraints_mut(&mut self) -> &mut [Constraint] {
        &mut self.constraints
    }

    /// Raw `g_k(x)` (min over parts for multipeak constraints, no transforms),
    /// or `τ_k(g_k(x))` with inner part transforms when `apply_transforms` is set.
    pub fn constraint_value(&self, k: usize, x: &Point, apply_transforms: bool) -> Result<f64> {
        let c = self
            .constraints
            .get(k)
            .ok_or(CobiError::IndexOutOfRange { index: k, len: self.constraints.len() })?;
        check_dim(self.dim, x.len())?;
        Ok(if apply_transforms { c.transformed_value(x) } else { c.raw_value(x) })
    }

    pub fn values(&self, x: &Point, apply_transforms: bool) -> Result<Vec<f64>> {
        check_dim(self.dim, x.len())?;
        Ok(self
            .constraints
            .iter()
            .map(|c| if apply_transforms { c.transformed_value(x) } else { c.raw_value(x) })
            .collect())
    }

    pub fn total_violation(&self, x: &Point) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        Ok(self.constraints.iter().map(|c| c.raw_value(x).max(0.0)).sum())
    }

    pub fn is_feasible(&self, x: &Point, tol: f64) -> Result<Feasibility> {
        let total_violation = self.total_violation(x)?;
        Ok(Feasibility { feasible: total_violation <= tol, total_violation })
    }

    pub fn multipeak_count(&self) -> usize {
        self.constraints.iter().filter(|c| matches!(c.kind, ConstraintKind::Multipeak(_))).count()
    }

    /// Number of convex selections without enumerating them.
    pub fn selection_count(&self) -> usize {
        self.constraints
            .iter()
            .map(|c| match &c.kind {
                ConstraintKind::Multipeak(m) => m.parts.len(),
                ConstraintKind::Convex(_) => 1,
            })
            .product()
    }

    /// Every way of replacing each multipeak constraint by one of its parts.
    ///
    /// Enumeration is odometer order with the last multipeak constraint
    /// varying fastest.
    pub fn convex_selections(&self) -> Vec<ConvexSelection> {
        let radices: Vec<usize> = self
            .constraints
            .iter()
            .filter_map(|c| match &c.kind {
                ConstraintKind::Multipeak(m) => Some(m.parts.len()),
                ConstraintKind::Convex(_) => None,
            })
            .collect();
        let total: usize = radices.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut choice = vec![0usize; radices.len()];
        for _ in 0..total {
            let mut picked = Vec::with_capacity(self.constraints.len());
            let mut m = 0;
            for c in &self.constraints {
                match &c.kind {
                    ConstraintKind::Convex(cc) => picked.push(cc.clone()),
                    ConstraintKind::Multipeak(mp) => {
                        picked.push(mp.parts[choice[m]].0.clone());
                        m += 1;
                    }
                }
            }
            out.push(ConvexSelection { dim: self.dim, constraints: picked, choice: choice.clone() });
            for d in (0..radices.len()).rev() {
                choice[d] += 1;
                if choice[d] < radices[d] {
                    break;
                }
                choice[d] = 0;
            }
        }
        out
    }
}

/// A constraint set made only of linear and convex-quadratic members.
#[derive(Clone, Debug)]
pub struct ConvexSelection {
    dim: usize,
    constraints: Vec<ConvexConstraint>,
    /// Chosen part index for each multipeak constraint, in order.
    choice: Vec<usize>,
}

impl ConvexSelection {
    pub fn new(dim: usize, constraints: Vec<ConvexConstraint>) -> Result<Self> {
        for c in &constraints {
            check_dim(dim, c.dim())?;
        }
        Ok(ConvexSelection { dim, constraints, choice: Vec::new() })
    }

    pub fn unconstrained(dim: usize) -> Self {
        ConvexSelection { dim, constraints: Vec::new(), choice: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[ConvexConstraint] {
        &self.constraints
    }

    pub fn choice(&self) -> &[usize] {
        &self.choice
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn is_linear(&self) -> bool {
        self.constraints.iter().all(ConvexConstraint::is_linear)
    }

    pub fn values(&self, x: &Point) -> Vec<f64> {
        self.constraints.iter().map(|c| c.value(x)).collect()
    }

    pub fn total_violation(&self, x: &Point) -> f64 {
        self.constraints.iter().map(|c| c.value(x).max(0.0)).sum()
    }

    pub fn max_value(&self, x: &Point) -> f64 {
        self.constraints.iter().map(|c| c.value(x)).fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn v(x: &[f64]) -> Point {
        DVector::from_column_slice(x)
    }

    fn lin(a: &[f64], b: f64) -> LinearConstraint {
        LinearConstraint::new(v(a), b).unwrap()
    }

    #[test]
    fn values() {
        let cs = ConstraintSet::new(2, vec![lin(&[1.0, 0.0], -1.0).into()]).unwrap();
        assert_eq!(cs.constraint_value(0, &v(&[3.0, 0.0]), false).unwrap(), 2.0);

        let mp = MultipeakConstraint::new(vec![
            (lin(&[1.0, 0.0], -1.0).into(), SignPreservingTransform::Identity),
            (QuadraticConstraint::new(v(&[0.0, 0.0]), SpdMatrix::identity(2), 1.0).unwrap().into(), SignPreservingTransform::Identity),
        ])
        .unwrap();
        let cs = ConstraintSet::new(2, vec![mp.into()]).unwrap();
        assert_eq!(cs.constraint_value(0, &v(&[0.0, 0.0]), false).unwrap(), -1.0);

        let q = QuadraticConstraint::new(v(&[1.0, 1.0]), SpdMatrix::diagonal(&[4.0, 1.0]).unwrap(), 0.5).unwrap();
        let cs = ConstraintSet::new(2, vec![q.into()]).unwrap();
        assert_eq!(cs.constraint_value(0, &v(&[1.0, 1.0]), false).unwrap(), -0.5);
        assert!(matches!(cs.constraint_value(1, &v(&[1.0, 1.0]), false), Err(CobiError::IndexOutOfRange { .. })));
        assert!(matches!(cs.constraint_value(0, &v(&[1.0]), false), Err(CobiError::DimensionMismatch { .. })));
    }

    #[test]
    fn feasibility() {
        let none = ConstraintSet::empty(2);
        assert_eq!(
            none.is_feasible(&v(&[5.0, -3.0]), FEASIBILITY_TOL).unwrap(),
            Feasibility { feasible: true, total_violation: 0.0 }
        );
        let cs = ConstraintSet::new(2, vec![lin(&[1.0, 0.0], -1.0).into()]).unwrap();
        assert_eq!(
            cs.is_feasible(&v(&[3.0, 0.0]), FEASIBILITY_TOL).unwrap(),
            Feasibility { feasible: false, total_violation: 2.0 }
        );
        let strip = ConstraintSet::new(2, vec![lin(&[1.0, 0.0], -1.0).into(), lin(&[-1.0, 0.0], 0.0).into()]).unwrap();
        assert_eq!(
            strip.is_feasible(&v(&[0.5, 0.0]), FEASIBILITY_TOL).unwrap(),
            Feasibility { feasible: true, total_violation: 0.0 }
        );
    }

    #[test]
    fn rejects_bad_members() {
        assert!(LinearConstraint::new(v(&[0.0, 0.0]), 1.0).is_err());
        assert!(QuadraticConstraint::new(v(&[0.0, 0.0]), SpdMatrix::identity(2), -0.1).is_err());
        assert!(MultipeakConstraint::new(vec![]).is_err());
    }

    fn multipeak(k: usize, shift: f64) -> Constraint {
        let parts = (0..k)
            .map(|i| {
                let c = QuadraticConstraint::ball(&[i as f64 * 2.0 + shift, 0.0], 0.7).unwrap();
                (c.into(), SignPreservingTransform::Identity)
            })
            .collect();
        MultipeakConstraint::new(parts).unwrap().into()
    }

    #[test]
    fn selections() {
        let q = QuadraticConstraint::ball(&[0.0, 0.0], 1.0).unwrap();
        let cs = ConstraintSet::new(2, vec![lin(&[1.0, 0.0], -1.0).into(), q.into()]).unwrap();
        let sel = cs.convex_selections();
        assert_eq!(sel.len(), 1);
        assert_eq!(sel[0].len(), 2);

        let cs = ConstraintSet::new(2, vec![multipeak(3, 0.0)]).unwrap();
        assert_eq!(cs.convex_selections().len(), 3);

        let cs = ConstraintSet::new(2, vec![multipeak(2, 0.0), lin(&[0.0, 1.0], -5.0).into(), multipeak(3, 0.5)]).unwrap();
        let sel = cs.convex_selections();
        assert_eq!(sel.len(), 6);
        assert_eq!(cs.selection_count(), 6);
        let mut seen: Vec<Vec<usize>> = sel.iter().map(|s| s.choice().to_vec()).collect();
        assert!(sel.iter().all(|s| s.len() == 3));
        seen.dedup();
        let mut oracle = Vec::new();
        for a in 0..2 {
            for b in 0..3 {
                oracle.push(vec![a, b]);
            }
        }
        assert_eq!(seen, oracle);
    }

    #[test]
    fn union_intersection_and_coverage_laws() {
        let lin_part = lin(&[1.0, 1.0], 1.5);
        let cs = ConstraintSet::new(
            2,
            vec![
                MultipeakConstraint::new(vec![
                    (QuadraticConstraint::ball(&[-1.0, 0.0], 1.0).unwrap().into(), SignPreservingTransform::BinaryStep),
                    (lin_part.clone().into(), SignPreservingTransform::SignedPower { exponent: 3.0 }),
                ])
                .unwrap()
                .into(),
                lin(&[0.0, 1.0], -1.0).into(),
                multipeak(2, -1.0),
            ],
        )
        .unwrap();
        let sels = cs.convex_selections();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..5000 {
            let x = v(&[rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)]);
            if let ConstraintKind::Multipeak(m) = &cs.constraints()[0].kind {
                let any = m.parts().iter().any(|(p, _)| p.value(&x) <= 0.0);
                assert_eq!(m.raw_value(&x) <= 0.0, any);
                assert_eq!(m.transformed_value(&x) <= 0.0, any);
            }
            let gmax = cs.values(&x, false).unwrap().into_iter().fold(f64::NEG_INFINITY, f64::max);
            let feasible = cs.is_feasible(&x, 0.0).unwrap().feasible;
            assert_eq!(feasible, gmax <= 0.0);
            let covered = sels.iter().any(|s| s.total_violation(&x) == 0.0);
            assert_eq!(feasible, covered);
        }
    }

    #[test]
    fn transform_neutrality_off_boundary() {
        let base = vec![lin(&[1.0, -0.5], 0.3).into(), QuadraticConstraint::ball(&[0.5, 0.5], 1.2).unwrap().into()];
        let plain = ConstraintSet::new(2, base.clone()).unwrap();
        let mut tr = ConstraintSet::new(2, base).unwrap();
        tr.constraints_mut()[0].transform = SignPreservingTransform::BinaryStep;
        tr.constraints_mut()[1].transform = SignPreservingTransform::PositiveScale { factor: 40.0 };
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..5000 {
            let x = v(&[rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)]);
            let raw = plain.values(&x, false).unwrap();
            if raw.iter().any(|g| g.abs() <= 1e-9) {
                continue;
            }
            let t = tr.values(&x, true).unwrap();
            let feas_t = t.iter().all(|g| *g <= 0.0);
            assert_eq!(plain.is_feasible(&x, FEASIBILITY_TOL).unwrap().feasible, feas_t);
            assert_eq!(tr.is_feasible(&x, FEASIBILITY_TOL).unwrap().feasible, feas_t);
        }
    }
}
