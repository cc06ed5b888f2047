//! ε-spaced weights along the unconstrained Pareto set of a peak pair.

use serde::Serialize;

use crate::constraint::ConvexSelection;
use crate::linalg::Point;
use crate::objective::QuadraticPeak;
use crate::projection::build_scalarized;

const MAX_BISECTIONS: usize = 60;
const LOWER_BAND: f64 = 0.9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightSchedule {
    /// Strictly increasing, from 0 to 1.
    pub weights: Vec<f64>,
    pub epsilon: f64,
    /// Extra weights placed between the two marching frontiers.
    pub stitch_iterations: usize,
}

impl WeightSchedule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// `h(θ) = c_θ`, the unconstrained minimizer of `θ f₁ + (1 − θ) f₂`.
pub fn unconstrained_point(peak1: &QuadraticPeak, peak2: &QuadraticPeak, theta: f64) -> Point {
    let free = ConvexSelection::unconstrained(peak1.dim());
    build_scalarized(peak1, peak2, theta.clamp(0.0, 1.0), &free)
        .map(|sp| sp.center().clone())
        .expect("peaks of one problem share a dimension")
}

/// Next weight between `from` and `toward` whose point lies between `0.9ε`
/// and `ε` from `h(from)`. Assumes `h(toward)` is farther than `ε`.
fn next_weight(h: &impl Fn(f64) -> Point, from: f64, base: &Point, toward: f64, eps: f64) -> f64 {
    let (mut near, mut far) = (from, toward);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (near + far);
        let d = (h(mid) - base).norm();
        if d > eps {
            far = mid;
        } else if d < LOWER_BAND * eps {
            near = mid;
        } else {
            return mid;
        }
    }
    if near != from {
        near
    } else {
        0.5 * (near + far)
    }
}

/// Marches from `start` toward `target` and returns the visited weights,
/// stopping once the last point is within `ε` of `h(target)`.
fn march(h: &impl Fn(f64) -> Point, start: f64, target: f64, eps: f64) -> Vec<f64> {
    let goal = h(target);
    let mut out = vec![start];
    let mut cur = start;
    let mut cur_point = h(start);
    while (&cur_point - &goal).norm() > eps {
        let next = next_weight(h, cur, &cur_point, target, eps);
        if next == cur {
            break;
        }
        cur = next;
        cur_point = h(cur);
        out.push(cur);
    }
    out
}

pub fn epsilon_weights(peak1: &QuadraticPeak, peak2: &QuadraticPeak, epsilon: f64) -> WeightSchedule {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let h = |t: f64| unconstrained_point(peak1, peak2, t);
    if (h(0.0) - h(1.0)).norm() <= epsilon {
        return WeightSchedule { weights: vec![0.0, 1.0], epsilon, stitch_iterations: 0 };
    }
    let forward = march(&h, 0.0, 0.5, epsilon);
    let backward = march(&h, 1.0, 0.5, epsilon);
    let front = *forward.last().unwrap();
    let back = *backward.last().unwrap();
    // Close the gap between the two frontiers.
    let stitch = if front < back { march(&h, front, back, epsilon) } else { vec![front] };
    let stitch_iterations = stitch.len() - 1;

    let mut weights: Vec<f64> = forward.into_iter().chain(stitch).chain(backward).collect();
    weights.sort_by(f64::total_cmp);
    weights.dedup();
    WeightSchedule { weights, epsilon, stitch_iterations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SpdMatrix;
    use nalgebra::DVector;

    fn spheres() -> (QuadraticPeak, QuadraticPeak) {
        (QuadraticPeak::sphere(&[0.0, 0.0]), QuadraticPeak::sphere(&[1.0, 0.0]))
    }

    #[test]
    fn unconstrained_points() {
        let (a, b) = spheres();
        let m = unconstrained_point(&a, &b, 0.5);
        assert!((m[0] - 0.5).abs() < 1e-15 && m[1] == 0.0);
        assert_eq!(unconstrained_point(&a, &b, 0.0), *b.center());

        let b2 = QuadraticPeak::quadratic(DVector::from_vec(vec![1.0, 1.0]), SpdMatrix::diagonal(&[4.0, 1.0]).unwrap(), 0.0)
            .unwrap();
        let p = unconstrained_point(&a, &b2, 0.5);
        assert!((p[0] - 0.8).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn segment_schedule() {
        let (a, b) = spheres();
        let s = epsilon_weights(&a, &b, 0.25);
        assert_eq!(s.len(), 5);
        let xs: Vec<f64> = s.weights.iter().map(|&t| unconstrained_point(&a, &b, t)[0]).collect();
        for (x, want) in xs.iter().zip([1.0, 0.75, 0.5, 0.25, 0.0]) {
            assert!((x - want).abs() < 1e-9, "{xs:?}");
        }
    }

    #[test]
    fn coarse_epsilon_gives_endpoints() {
        let (a, b) = spheres();
        assert_eq!(epsilon_weights(&a, &b, 1.0).weights, vec![0.0, 1.0]);
        assert_eq!(epsilon_weights(&a, &b, 3.0).weights, vec![0.0, 1.0]);
    }

    #[test]
    fn halving_roughly_doubles() {
        let (a, b) = spheres();
        for eps in [0.3, 0.1, 0.07, 0.013] {
            let n1 = epsilon_weights(&a, &b, eps).len() as i64;
            let n2 = epsilon_weights(&a, &b, eps / 2.0).len() as i64;
            assert!((2 * n1 - 3..=2 * n1 + 3).contains(&n2), "{eps}: {n1} -> {n2}");
        }
    }

    #[test]
    fn spacing_on_curved_set() {
        let a = QuadraticPeak::quadratic(DVector::from_vec(vec![0.0, 0.0]), SpdMatrix::diagonal(&[100.0, 1.0]).unwrap(), 0.0)
            .unwrap();
        let b = QuadraticPeak::quadratic(DVector::from_vec(vec![1.0, 2.0]), SpdMatrix::diagonal(&[1.0, 30.0]).unwrap(), 0.0)
            .unwrap();
        for eps in [0.1, 0.01] {
            let s = epsilon_weights(&a, &b, eps);
            assert!(s.weights.windows(2).all(|w| w[0] < w[1]));
            for w in s.weights.windows(2) {
                let d = (unconstrained_point(&a, &b, w[0]) - unconstrained_point(&a, &b, w[1])).norm();
                assert!(d <= eps * (1.0 + 1e-12), "{d} > {eps}");
            }
        }
    }
}
