//! Log-barrier interior-point method for selections with quadratic members.

use nalgebra::{Cholesky, DMatrix, DVector};

use super::{ScalarizedProblem, SolveOutcome, MAX_ITERATIONS};
use crate::constraint::{ConvexConstraint, ConvexSelection};
use crate::linalg::{max_abs, Point};

const NEWTON_TOL: f64 = 1e-12;
const MAX_NEWTON_PER_STAGE: usize = 200;
const MAX_HALVINGS: usize = 80;
/// Barrier weights `t = 1/μ` for `μ = 1, 0.1, …, 1e-10`.
const STAGES: i32 = 11;

pub(super) fn solve(sp: &ScalarizedProblem, start: Option<&Point>) -> SolveOutcome {
    let sel = sp.constraints();
    let mut iterations = 0usize;
    let candidates = start.into_iter().chain(std::iter::once(sp.center()));
    let mut x = None;
    for c in candidates {
        if sel.max_value(c) < 0.0 {
            x = Some(c.clone());
            break;
        }
    }
    let mut x = match x {
        Some(x) => x,
        None => {
            let from = start.unwrap_or(sp.center());
            match phase_one(sel, from, &mut iterations) {
                Some(x) => x,
                None => return SolveOutcome::Infeasible { x: from.clone(), iterations },
            }
        }
    };

    let mut t = 1.0;
    for _ in 0..STAGES {
        if !center(sp, &mut x, t, &mut iterations) {
            return SolveOutcome::Failed { x, iterations };
        }
        t *= 10.0;
    }
    let t_final = t / 10.0;
    let x = polish(sp, &x, t_final, &mut iterations).unwrap_or(x);
    SolveOutcome::Solved { x, iterations }
}

/// Newton centering of `t F(x) − Σ log(−g_k(x))`. Returns false only when the
/// iteration budget is exhausted.
fn center(sp: &ScalarizedProblem, x: &mut Point, t: f64, iterations: &mut usize) -> bool {
    let cons = sp.constraints().constraints();
    let n = x.len();
    let phi = |x: &Point| -> Option<f64> {
        let mut v = t * (sp.objective(x) - sp.offset());
        for c in cons {
            let g = c.value(x);
            if !(g < 0.0) {
                return None;
            }
            v -= (-g).ln();
        }
        Some(v)
    };
    for _ in 0..MAX_NEWTON_PER_STAGE {
        *iterations += 1;
        if *iterations > MAX_ITERATIONS {
            return false;
        }
        let mut grad = sp.gradient(x) * t;
        let mut hess = sp.hessian().matrix() * t;
        for c in cons {
            let g = c.value(x);
            let dg = c.gradient(x);
            let inv = 1.0 / (-g);
            grad.axpy(inv, &dg, 1.0);
            hess.ger(inv * inv, &dg, &dg, 1.0);
            if let Some(h) = c.hessian() {
                hess += h.matrix() * inv;
            }
        }
        let Some(dx) = newton_direction(hess, &grad, n) else {
            return true;
        };
        let slope = grad.dot(&dx);
        if -slope / 2.0 <= NEWTON_TOL {
            return true;
        }
        let Some(f0) = phi(x) else { return true };
        let mut alpha = 1.0;
        let mut moved = false;
        for _ in 0..MAX_HALVINGS {
            let trial = &*x + &dx * alpha;
            if let Some(f1) = phi(&trial) {
                if f1 <= f0 + 0.25 * alpha * slope {
                    *x = trial;
                    moved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !moved {
            return true;
        }
    }
    true
}

fn newton_direction(mut hess: DMatrix<f64>, grad: &DVector<f64>, n: usize) -> Option<DVector<f64>> {
    let scale = hess.diagonal().iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    for k in 0..8 {
        if let Some(ch) = Cholesky::new(hess.clone()) {
            return Some(-ch.solve(grad));
        }
        let shift = scale * 1e-14 * 100f64.powi(k);
        for i in 0..n {
            hess[(i, i)] += shift;
        }
    }
    None
}

/// Finds `x` with `max_k g_k(x) < 0` by centering
/// `t s − Σ log(s − g_k(x)) − log(s + S)` over `(x, s)`.
pub(super) fn phase_one(sel: &ConvexSelection, start: &Point, iterations: &mut usize) -> Option<Point> {
    let cons = sel.constraints();
    let n = start.len();
    let gmax0 = sel.max_value(start);
    if gmax0 < 0.0 {
        return Some(start.clone());
    }
    // Lower bound on s keeping the problem bounded for purely linear selections.
    let floor = 1.0 + gmax0.abs();
    let mut x = start.clone();
    let mut s = gmax0 + 1.0;
    let phi = |x: &Point, s: f64, t: f64| -> Option<f64> {
        if !(s + floor > 0.0) {
            return None;
        }
        let mut v = t * s - (s + floor).ln();
        for c in cons {
            let slack = s - c.value(x);
            if !(slack > 0.0) {
                return None;
            }
            v -= slack.ln();
        }
        Some(v)
    };
    let mut t = 1.0;
    for _ in 0..12 {
        for _ in 0..MAX_NEWTON_PER_STAGE {
            *iterations += 1;
            if *iterations > MAX_ITERATIONS {
                return None;
            }
            let mut grad = DVector::<f64>::zeros(n + 1);
            let mut hess = DMatrix::<f64>::zeros(n + 1, n + 1);
            grad[n] = t - 1.0 / (s + floor);
            hess[(n, n)] = 1.0 / ((s + floor) * (s + floor));
            for c in cons {
                let inv = 1.0 / (s - c.value(&x));
                let dg = c.gradient(&x);
                // d/dx = inv ∇g, d/ds = −inv
                let mut full = DVector::<f64>::zeros(n + 1);
                full.rows_mut(0, n).copy_from(&dg);
                full[n] = -1.0;
                grad.axpy(inv, &full, 1.0);
                hess.ger(inv * inv, &full, &full, 1.0);
                if let Some(h) = c.hessian() {
                    let mut block = hess.view_mut((0, 0), (n, n));
                    block += h.matrix() * inv;
                }
            }
            let Some(d) = newton_direction(hess, &grad, n + 1) else { break };
            let slope = grad.dot(&d);
            if -slope / 2.0 <= NEWTON_TOL {
                break;
            }
            let Some(f0) = phi(&x, s, t) else { return None };
            let mut alpha = 1.0;
            let mut moved = false;
            for _ in 0..MAX_HALVINGS {
                let xt = &x + d.rows(0, n) * alpha;
                let st = s + d[n] * alpha;
                if let Some(f1) = phi(&xt, st, t) {
                    if f1 <= f0 + 0.25 * alpha * slope {
                        x = xt;
                        s = st;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !moved {
                break;
            }
            if sel.max_value(&x) < 0.0 && t >= 1.0 {
                // Keep centering at this t for a well-interior point, then stop.
                continue;
            }
        }
        if sel.max_value(&x) < 0.0 {
            return Some(x);
        }
        t *= 10.0;
    }
    None
}

/// Newton–KKT refinement on the constraints the barrier identifies as active,
/// dropping any whose multiplier turns negative. Returns `None` when no
/// consistent active set is found.
fn polish(sp: &ScalarizedProblem, xb: &Point, t: f64, iterations: &mut usize) -> Option<Point> {
    let cons = sp.constraints().constraints();
    let grad_scale = max_abs(&sp.gradient(xb)).max(1.0);
    let mut working: Vec<usize> = (0..cons.len())
        .filter(|&k| {
            let g = cons[k].value(xb);
            let lambda = 1.0 / (t * (-g));
            lambda * max_abs(&cons[k].gradient(xb)) > 1e-11 * grad_scale
        })
        .collect();
    if working.is_empty() {
        return None;
    }
    for _ in 0..(2 * cons.len() + 2) {
        let lambda0: Vec<f64> = working.iter().map(|&k| 1.0 / (t * (-cons[k].value(xb)).max(1e-300))).collect();
        let (x, lambda) = newton_kkt(sp, cons, &working, xb, &lambda0, iterations)?;
        let tol = 1e-9 * grad_scale;
        if let Some((i, _)) = lambda
            .iter()
            .enumerate()
            .filter(|(_, l)| **l < -tol)
            .min_by(|a, b| a.1.total_cmp(b.1))
        {
            working.remove(i);
            if working.is_empty() {
                return None;
            }
            continue;
        }
        let violated: Vec<usize> = (0..cons.len())
            .filter(|k| !working.contains(k))
            .filter(|&k| cons[k].value(&x) > 1e-12 * (1.0 + max_abs(&cons[k].gradient(&x))))
            .collect();
        if let Some(&k) = violated.first() {
            working.push(k);
            working.sort_unstable();
            continue;
        }
        if (&x - xb).norm() > 1e-3 * (1.0 + xb.norm()) {
            return None;
        }
        return Some(x);
    }
    None
}

fn newton_kkt(
    sp: &ScalarizedProblem,
    cons: &[ConvexConstraint],
    working: &[usize],
    x0: &Point,
    lambda0: &[f64],
    iterations: &mut usize,
) -> Option<(Point, Vec<f64>)> {
    let n = x0.len();
    let m = working.len();
    if m > n {
        return None;
    }
    let mut x = x0.clone();
    let mut lambda = DVector::from_column_slice(lambda0);
    let mut best: Option<(f64, Point, DVector<f64>)> = None;
    for _ in 0..50 {
        *iterations += 1;
        let mut r1 = sp.gradient(&x);
        let mut kkt = DMatrix::<f64>::zeros(n + m, n + m);
        kkt.view_mut((0, 0), (n, n)).copy_from(sp.hessian().matrix());
        let mut r2 = DVector::<f64>::zeros(m);
        for (j, &k) in working.iter().enumerate() {
            let dg = cons[k].gradient(&x);
            r1.axpy(lambda[j], &dg, 1.0);
            r2[j] = cons[k].value(&x);
            if let Some(h) = cons[k].hessian() {
                let mut block = kkt.view_mut((0, 0), (n, n));
                block += h.matrix() * lambda[j];
            }
            for i in 0..n {
                kkt[(i, n + j)] = dg[i];
                kkt[(n + j, i)] = dg[i];
            }
        }
        let res = max_abs(&r1).max(max_abs(&r2));
        if best.as_ref().map_or(true, |(r, _, _)| res < *r) {
            best = Some((res, x.clone(), lambda.clone()));
        }
        if res <= 1e-15 * (1.0 + max_abs(&x)) {
            break;
        }
        let mut rhs = DVector::<f64>::zeros(n + m);
        rhs.rows_mut(0, n).copy_from(&(-r1));
        rhs.rows_mut(n, m).copy_from(&(-r2));
        let step = kkt.lu().solve(&rhs)?;
        if step.iter().any(|v| !v.is_finite()) {
            return None;
        }
        x += step.rows(0, n);
        lambda += step.rows(n, m);
    }
    let (res, x, lambda) = best?;
    if !(res <= 1e-9 * (1.0 + max_abs(&sp.gradient(&x)))) {
        return None;
    }
    Some((x, lambda.iter().copied().collect()))
}
