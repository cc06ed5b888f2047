//! Constrained scalarized minimization: the `|.|_{H_θ}` projection of the
//! unconstrained scalarized optimum `c_θ` onto a convex selection.
//!
//! Linear-only selections go through a dual active-set method in whitened
//! coordinates; selections with quadratic members use a log-barrier interior
//! point method followed by an active-set Newton polish.

mod active_set;
mod barrier;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::constraint::ConvexSelection;
use crate::error::{check_dim, CobiError, Result};
use crate::linalg::{max_abs, Point, SpdMatrix};
use crate::objective::QuadraticPeak;

/// Constraints with `|g_k(x)|` at or below this are reported as active.
pub const ACTIVE_TOL: f64 = 1e-7;
pub const VIOLATION_TOL: f64 = 1e-8;
pub const KKT_TOL: f64 = 1e-7;
/// Cap on inner iterations (Newton steps or active-set changes) per projection.
pub const MAX_ITERATIONS: usize = 1_000_000;

/// `F_θ(x) = ½ (x − c_θ)ᵀ H_θ (x − c_θ) + θ v₁ + (1 − θ) v₂` restricted to a convex selection.
#[derive(Clone, Debug)]
pub struct ScalarizedProblem<'a> {
    weight: f64,
    hessian: SpdMatrix,
    center: Point,
    offset: f64,
    constraints: &'a ConvexSelection,
}

impl<'a> ScalarizedProblem<'a> {
    /// A scalarized problem given directly by its metric and center.
    pub fn from_parts(hessian: SpdMatrix, center: Point, constraints: &'a ConvexSelection) -> Result<Self> {
        check_dim(hessian.dim(), center.len())?;
        check_dim(hessian.dim(), constraints.dim())?;
        Ok(ScalarizedProblem { weight: f64::NAN, hessian, center, offset: 0.0, constraints })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn hessian(&self) -> &SpdMatrix {
        &self.hessian
    }

    /// The unconstrained minimizer `c_θ`.
    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn constraints(&self) -> &'a ConvexSelection {
        self.constraints
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn objective(&self, x: &Point) -> f64 {
        0.5 * self.hessian.quad_form(&(x - &self.center)) + self.offset
    }

    pub fn gradient(&self, x: &Point) -> Point {
        self.hessian.mul_vec(&(x - &self.center))
    }

    /// Same metric and constraints, new center.
    pub fn recentered(&self, center: Point) -> Self {
        ScalarizedProblem { center, ..self.clone() }
    }
}

/// `H_θ = θ H₁ + (1 − θ) H₂`, `c_θ = H_θ⁻¹ (θ H₁ c₁ + (1 − θ) H₂ c₂)`.
/// `θ = 1` and `θ = 0` return peak 1 and peak 2 exactly.
pub fn build_scalarized<'a>(
    peak1: &QuadraticPeak,
    peak2: &QuadraticPeak,
    theta: f64,
    constraints: &'a ConvexSelection,
) -> Result<ScalarizedProblem<'a>> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(CobiError::InvalidArgument(format!("weight must lie in [0, 1], got {theta}")));
    }
    check_dim(peak1.dim(), peak2.dim())?;
    check_dim(peak1.dim(), constraints.dim())?;
    let offset = theta * peak1.offset() + (1.0 - theta) * peak2.offset();
    let (hessian, center) = if theta == 1.0 {
        (peak1.hessian().clone(), peak1.center().clone())
    } else if theta == 0.0 {
        (peak2.hessian().clone(), peak2.center().clone())
    } else {
        let h = SpdMatrix::convex_combination(peak1.hessian(), peak2.hessian(), theta)?;
        let rhs = peak1.hessian().mul_vec(peak1.center()) * theta
            + peak2.hessian().mul_vec(peak2.center()) * (1.0 - theta);
        let c = h.solve(&rhs);
        (h, c)
    };
    Ok(ScalarizedProblem { weight: theta, hessian, center, offset, constraints })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProjectionStatus {
    Optimal,
    InfeasibleWithinTolerance,
    SolverFailure,
}

#[derive(Clone, Debug)]
pub struct ProjectionResult {
    pub x_star: Point,
    pub status: ProjectionStatus,
    pub kkt_residual: f64,
    pub violation: f64,
    pub active_set: Vec<usize>,
    /// Least-squares multipliers of `active_set`, in the same order.
    pub multipliers: Vec<f64>,
    pub iterations: usize,
}

impl ProjectionResult {
    pub fn is_optimal(&self) -> bool {
        self.status == ProjectionStatus::Optimal
    }
}

/// Stationarity measured with least-squares multipliers on the active set.
#[derive(Clone, Debug)]
pub struct KktReport {
    pub residual: f64,
    pub active_set: Vec<usize>,
    pub multipliers: Vec<f64>,
    /// `|H_θ (x − c_θ)|_∞`, the scale the residual is judged against.
    pub gradient_scale: f64,
}

pub fn kkt_report(sp: &ScalarizedProblem, x: &Point) -> KktReport {
    let grad = sp.gradient(x);
    let cons = sp.constraints().constraints();
    let active_set: Vec<usize> =
        (0..cons.len()).filter(|&k| cons[k].value(x).abs() <= ACTIVE_TOL).collect();
    let gradient_scale = max_abs(&grad);
    if active_set.is_empty() {
        return KktReport { residual: gradient_scale, active_set, multipliers: Vec::new(), gradient_scale };
    }
    let n = x.len();
    let jt = DMatrix::from_fn(n, active_set.len(), |i, j| cons[active_set[j]].gradient(x)[i]);
    let svd = jt.clone().svd(true, true);
    let tol = 1e-13 * svd.singular_values.max().max(1e-300);
    let mu: DVector<f64> = svd.solve(&(-&grad), tol).unwrap_or_else(|_| DVector::zeros(active_set.len()));
    let residual = max_abs(&(grad + jt * &mu));
    KktReport { residual, active_set, multipliers: mu.iter().copied().collect(), gradient_scale }
}

/// Projects `c_θ` onto the selection, starting the interior-point path (when
/// used) from a strictly feasible point found near `c_θ`.
pub fn project(sp: &ScalarizedProblem) -> ProjectionResult {
    project_from(sp, None)
}

/// As [`project`], with a preferred starting point for the interior-point path.
pub fn project_from(sp: &ScalarizedProblem, start: Option<&Point>) -> ProjectionResult {
    let sel = sp.constraints();
    let center = sp.center().clone();
    if sel.max_value(&center) <= 0.0 || sel.is_empty() {
        return finish(sp, center, 0, true);
    }
    let outcome = if sel.is_linear() {
        active_set::solve(sp)
    } else {
        barrier::solve(sp, start)
    };
    match outcome {
        SolveOutcome::Solved { x, iterations } => finish(sp, x, iterations, true),
        SolveOutcome::Infeasible { x, iterations } => ProjectionResult {
            violation: sel.total_violation(&x),
            x_star: x,
            status: ProjectionStatus::InfeasibleWithinTolerance,
            kkt_residual: f64::INFINITY,
            active_set: Vec::new(),
            multipliers: Vec::new(),
            iterations,
        },
        SolveOutcome::Failed { x, iterations } => finish(sp, x, iterations, false),
    }
}

pub(crate) enum SolveOutcome {
    Solved { x: Point, iterations: usize },
    Infeasible { x: Point, iterations: usize },
    Failed { x: Point, iterations: usize },
}

fn finish(sp: &ScalarizedProblem, x: Point, iterations: usize, converged: bool) -> ProjectionResult {
    let violation = sp.constraints().total_violation(&x);
    let kkt = kkt_report(sp, &x);
    // The stationarity test is absolute for unit-scale gradients and relative
    // beyond, since the residual carries rounding error proportional to |∇F|.
    let scale = kkt.gradient_scale.max(1.0);
    let signs_ok = kkt.multipliers.iter().all(|&m| m >= -KKT_TOL * scale);
    let ok = converged && violation <= VIOLATION_TOL && kkt.residual <= KKT_TOL * scale && signs_ok;
    let status = if ok {
        ProjectionStatus::Optimal
    } else if violation > VIOLATION_TOL && converged {
        ProjectionStatus::InfeasibleWithinTolerance
    } else {
        ProjectionStatus::SolverFailure
    };
    ProjectionResult {
        x_star: x,
        status,
        kkt_residual: kkt.residual,
        violation,
        active_set: kkt.active_set,
        multipliers: kkt.multipliers,
        iterations,
    }
}

/// A strictly feasible point of the selection (all `g_k < 0`), if one exists.
pub fn strictly_feasible_point(sel: &ConvexSelection, start: &Point) -> Option<Point> {
    if sel.is_empty() || sel.max_value(start) < 0.0 {
        return Some(start.clone());
    }
    let mut iterations = 0;
    barrier::phase_one(sel, start, &mut iterations)
}
