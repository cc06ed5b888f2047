//! Goldfarb–Idnani dual active-set method for linear-only selections.
//!
//! With `H_θ = L Lᵀ` and `z = Lᵀ (x − c_θ)` the problem becomes the least
//! distance problem `min ½|z|²` s.t. `n_kᵀ z >= β_k`, where
//! `n_k = −L⁻¹ a_k` and `β_k = a_kᵀ c_θ + b_k`. The unconstrained optimum
//! `z = 0` is dual feasible, and violated constraints are added one at a time.

use nalgebra::{DMatrix, DVector};

use super::{ScalarizedProblem, SolveOutcome, MAX_ITERATIONS};
use crate::constraint::ConvexConstraint;

pub(super) fn solve(sp: &ScalarizedProblem) -> SolveOutcome {
    let n = sp.dim();
    let l = sp.hessian().factor();
    let center = sp.center();
    let lin: Vec<(DVector<f64>, f64)> = sp
        .constraints()
        .constraints()
        .iter()
        .map(|c| match c {
            ConvexConstraint::Linear(lc) => (lc.normal().clone(), lc.intercept()),
            ConvexConstraint::Quadratic(_) => unreachable!("active-set path only sees linear selections"),
        })
        .collect();
    let normals: Vec<DVector<f64>> = lin
        .iter()
        .map(|(a, _)| -l.solve_lower_triangular(a).expect("Cholesky factor is invertible"))
        .collect();
    let betas: Vec<f64> = lin.iter().map(|(a, b)| a.dot(center) + b).collect();
    let norms: Vec<f64> = normals.iter().map(|v| v.norm()).collect();

    let to_x = |z: &DVector<f64>| -> DVector<f64> {
        center + l.tr_solve_lower_triangular(z).expect("Cholesky factor is invertible")
    };

    let mut z = DVector::<f64>::zeros(n);
    let mut active: Vec<usize> = Vec::new();
    let mut u: Vec<f64> = Vec::new();
    let mut iterations = 0usize;

    loop {
        // Most violated constraint, by normalized slack.
        let znorm = z.norm();
        let mut pick: Option<(usize, f64)> = None;
        for k in 0..normals.len() {
            if active.contains(&k) {
                continue;
            }
            let slack = normals[k].dot(&z) - betas[k];
            let tol = 1e-13 * (norms[k] * (1.0 + znorm) + betas[k].abs());
            if slack < -tol {
                let scaled = slack / norms[k];
                if pick.map_or(true, |(_, s)| scaled < s) {
                    pick = Some((k, scaled));
                }
            }
        }
        let Some((p, _)) = pick else {
            return SolveOutcome::Solved { x: to_x(&z), iterations };
        };
        let np = &normals[p];
        let mut up = 0.0;

        loop {
            iterations += 1;
            if iterations > MAX_ITERATIONS.min(100 * (normals.len() + n) + 1000) {
                return SolveOutcome::Failed { x: to_x(&z), iterations };
            }
            let (d, r) = directions(&normals, &active, np, n);
            // Largest dual step keeping active multipliers nonnegative.
            let mut t1 = f64::INFINITY;
            let mut drop_at = None;
            for (i, &ri) in r.iter().enumerate() {
                if ri > 0.0 {
                    let t = u[i] / ri;
                    if t < t1 {
                        t1 = t;
                        drop_at = Some(i);
                    }
                }
            }
            let dnorm2 = d.norm_squared();
            let slack = np.dot(&z) - betas[p];
            let t2 = if dnorm2 <= (1e-12 * norms[p]).powi(2) {
                f64::INFINITY
            } else {
                (-slack / np.dot(&d)).max(0.0)
            };
            let t = t1.min(t2);
            if t.is_infinite() {
                return SolveOutcome::Infeasible { x: to_x(&z), iterations };
            }
            for (ui, ri) in u.iter_mut().zip(&r) {
                *ui -= t * ri;
            }
            up += t;
            if t2.is_finite() {
                z += &d * t;
            }
            if t2 <= t1 {
                active.push(p);
                u.push(up);
                break;
            }
            let i = drop_at.expect("finite partial step has a blocking constraint");
            active.remove(i);
            u.remove(i);
        }
    }
}

/// Primal direction `d = (I − N N⁺) n_p` and dual direction `r = N⁺ n_p` for
/// active normals `N` (columns).
fn directions(normals: &[DVector<f64>], active: &[usize], np: &DVector<f64>, n: usize) -> (DVector<f64>, Vec<f64>) {
    if active.is_empty() {
        return (np.clone(), Vec::new());
    }
    let m = DMatrix::from_fn(n, active.len(), |i, j| normals[active[j]][i]);
    let qr = m.qr();
    let q = qr.q();
    let rmat = qr.r();
    let qt_np = q.tr_mul(np);
    let d = np - &q * &qt_np;
    let r = rmat
        .solve_upper_triangular(&qt_np)
        .unwrap_or_else(|| DVector::zeros(active.len()));
    (d, r.iter().copied().collect())
}
