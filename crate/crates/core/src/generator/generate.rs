//! Seeded instance construction.
//!
//! Draw order from one ChaCha20 stream: peak centers (all of `f1`, then all
//! of `f2`), peak offsets, condition numbers, rotations, the anchor, and
//! finally each constraint in recipe order.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::config::{ConstraintRecipe, ConvexKind, FeasibilityMode, GeneratorConfig, ANCHOR_MARGIN};
use crate::constraint::{
    Constraint, ConstraintSet, ConvexConstraint, LinearConstraint, MultipeakConstraint, QuadraticConstraint,
};
use crate::error::{CobiError, Result};
use crate::linalg::{log_uniform_spectrum, random_rotation, spd_from_spectrum, Point, SpdMatrix};
use crate::objective::{MultipeakObjective, QuadraticPeak};
use crate::problem::{CobiProblem, ProblemMeta, SearchBox};
use crate::projection::strictly_feasible_point;
use crate::transform::{MonotoneTransform, SignPreservingTransform};

const MAX_CENTER_DRAWS: usize = 10_000;

fn uniform_point(rng: &mut ChaCha20Rng, n: usize, (lo, hi): (f64, f64)) -> Point {
    DVector::from_fn(n, |_, _| rng.random_range(lo..hi))
}

fn log_uniform(rng: &mut ChaCha20Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        // Keep the stream aligned with the non-degenerate case.
        let _: f64 = rng.random();
        return lo;
    }
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp().clamp(lo, hi)
}

fn random_spd(rng: &mut ChaCha20Rng, n: usize, kappa: (f64, f64)) -> Result<SpdMatrix> {
    let k = log_uniform(rng, kappa);
    let rot = random_rotation(n, rng);
    spd_from_spectrum(&log_uniform_spectrum(n, k), &rot)
}

fn draw_convex(rng: &mut ChaCha20Rng, cfg: &GeneratorConfig, kind: ConvexKind) -> Result<ConvexConstraint> {
    let n = cfg.dimension;
    let (lo, hi) = cfg.center_box;
    Ok(match kind {
        ConvexKind::Linear => {
            let mut a: Point = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let norm = a.norm();
            if norm > 0.0 {
                a /= norm;
            } else {
                a[0] = 1.0;
            }
            let through = uniform_point(rng, n, cfg.center_box);
            let b = -a.dot(&through);
            LinearConstraint::new(a, b)?.into()
        }
        ConvexKind::Quadratic => {
            let center = uniform_point(rng, n, cfg.center_box);
            let q = random_spd(rng, n, cfg.kappa)?;
            let r = rng.random_range(0.25..0.6) * (hi - lo) * (n as f64).sqrt() / 2.0;
            QuadraticConstraint::new(center, q, 0.5 * r * r)?.into()
        }
    })
}

/// Moves the constraint so that `g(anchor) <= -margin`.
fn make_feasible_at(c: ConvexConstraint, anchor: &Point) -> Result<ConvexConstraint> {
    Ok(match c {
        ConvexConstraint::Linear(l) => {
            let b = l.intercept().min(-ANCHOR_MARGIN - l.normal().dot(anchor));
            LinearConstraint::new(l.normal().clone(), b)?.into()
        }
        ConvexConstraint::Quadratic(q) => {
            let at = 0.5 * q.hessian().quad_form(&(anchor - q.center()));
            let level = q.level().max(at + ANCHOR_MARGIN);
            QuadraticConstraint::new(q.center().clone(), q.hessian().clone(), level)?.into()
        }
    })
}

fn draw_constraints(rng: &mut ChaCha20Rng, cfg: &GeneratorConfig, anchor: &Point) -> Result<Vec<Constraint>> {
    let n = cfg.dimension;
    let anchored = cfg.feasibility == FeasibilityMode::Anchor;
    let tr = cfg.transforms.constraints;
    let mut out = Vec::new();
    let wrap = |kind: crate::constraint::ConstraintKind| Constraint::new(kind, tr);
    for recipe in &cfg.constraints {
        match recipe {
            ConstraintRecipe::Linear | ConstraintRecipe::Quadratic => {
                let kind = if *recipe == ConstraintRecipe::Linear { ConvexKind::Linear } else { ConvexKind::Quadratic };
                let mut c = draw_convex(rng, cfg, kind)?;
                if anchored {
                    c = make_feasible_at(c, anchor)?;
                }
                out.push(wrap(crate::constraint::ConstraintKind::Convex(c))?);
            }
            ConstraintRecipe::Multipeak { parts } => {
                let mut drawn = parts.iter().map(|&k| draw_convex(rng, cfg, k)).collect::<Result<Vec<_>>>()?;
                if anchored {
                    let (best, value) = drawn
                        .iter()
                        .enumerate()
                        .map(|(i, c)| (i, c.value(anchor)))
                        .min_by(|a, b| a.1.total_cmp(&b.1))
                        .expect("validated non-empty");
                    if value > -ANCHOR_MARGIN {
                        drawn[best] = make_feasible_at(drawn[best].clone(), anchor)?;
                    }
                }
                let m = MultipeakConstraint::new(drawn.into_iter().map(|c| (c, SignPreservingTransform::Identity)).collect())?;
                out.push(wrap(crate::constraint::ConstraintKind::Multipeak(m))?);
            }
            ConstraintRecipe::Box { lower, upper } => {
                for i in 0..n {
                    for (sign, bound) in [(1.0, *upper), (-1.0, *lower)] {
                        let mut a = DVector::zeros(n);
                        a[i] = sign;
                        let mut c: ConvexConstraint = LinearConstraint::new(a, -sign * bound)?.into();
                        if anchored {
                            c = make_feasible_at(c, anchor)?;
                        }
                        out.push(wrap(crate::constraint::ConstraintKind::Convex(c))?);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn draw_centers(rng: &mut ChaCha20Rng, cfg: &GeneratorConfig) -> Result<Vec<Point>> {
    let n = cfg.dimension;
    let (lo, hi) = cfg.center_box;
    let min_dist = 1e-6 * (hi - lo) * (n as f64).sqrt();
    let total = cfg.peaks.0 + cfg.peaks.1;
    let mut centers: Vec<Point> = Vec::with_capacity(total);
    for k in 0..total {
        let mut draws = 0;
        loop {
            draws += 1;
            if draws > MAX_CENTER_DRAWS {
                return Err(CobiError::Generation(format!("no distinct center found for peak {k}")));
            }
            let c = uniform_point(rng, n, cfg.center_box);
            if centers.iter().all(|o| (o - &c).norm() >= min_dist) {
                centers.push(c);
                break;
            }
        }
    }
    Ok(centers)
}

pub fn instance_id(cfg: &GeneratorConfig) -> String {
    format!("gen-n{}-p{}x{}-c{}-s{}", cfg.dimension, cfg.peaks.0, cfg.peaks.1, cfg.constraint_count(), cfg.seed)
}

/// Builds an instance; a pure function of the configuration (including its seed).
pub fn generate(cfg: &GeneratorConfig) -> Result<CobiProblem> {
    cfg.validate()?;
    let n = cfg.dimension;
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let total = cfg.peaks.0 + cfg.peaks.1;

    let centers = draw_centers(&mut rng, cfg)?;
    let offsets: Vec<f64> = (0..total).map(|_| rng.random_range(cfg.offsets.0..=cfg.offsets.1)).collect();
    let kappas: Vec<f64> = (0..total).map(|_| log_uniform(&mut rng, cfg.kappa)).collect();
    let rotations: Vec<_> = (0..total).map(|_| random_rotation(n, &mut rng)).collect();

    let mut peaks = Vec::with_capacity(total);
    for k in 0..total {
        let h = spd_from_spectrum(&log_uniform_spectrum(n, kappas[k]), &rotations[k])?;
        peaks.push(QuadraticPeak::new(centers[k].clone(), h, offsets[k], MonotoneTransform::Identity)?);
    }
    let f2_peaks = peaks.split_off(cfg.peaks.0);
    let objectives = [
        MultipeakObjective::new(peaks, cfg.transforms.objectives[0])?,
        MultipeakObjective::new(f2_peaks, cfg.transforms.objectives[1])?,
    ];

    let drawn_anchor = uniform_point(&mut rng, n, cfg.center_box);
    let constraints = ConstraintSet::new(n, draw_constraints(&mut rng, cfg, &drawn_anchor)?)?;
    let anchor = if constraints.is_feasible(&drawn_anchor, crate::constraint::FEASIBILITY_TOL)?.feasible {
        drawn_anchor
    } else {
        constraints
            .convex_selections()
            .iter()
            .find_map(|sel| strictly_feasible_point(sel, &drawn_anchor))
            .ok_or_else(|| CobiError::Generation("the drawn constraints leave no feasible point".into()))?
    };

    let (lo, hi) = cfg.center_box;
    let pad = 0.5 * (hi - lo);
    let search_box = SearchBox::cube(n, lo - pad, hi + pad)?;
    let meta = ProblemMeta { id: instance_id(cfg), name: "generated".into(), seed: Some(cfg.seed) };
    CobiProblem::new(objectives, constraints, anchor, search_box, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify, ProblemType};

    fn cfg(constraints: Vec<ConstraintRecipe>, seed: u64) -> GeneratorConfig {
        let mut c = GeneratorConfig::new(2, seed);
        c.constraints = constraints;
        c
    }

    #[test]
    fn unconstrained_is_type_one() {
        let p = generate(&cfg(vec![], 3)).unwrap();
        assert!(p.constraints().is_empty());
        assert_eq!(classify(&p, 0.05).unwrap().kind, ProblemType::I);
    }

    #[test]
    fn anchor_has_margin() {
        let all = vec![
            ConstraintRecipe::Linear,
            ConstraintRecipe::Quadratic,
            ConstraintRecipe::Multipeak { parts: vec![ConvexKind::Quadratic, ConvexKind::Linear, ConvexKind::Quadratic] },
            ConstraintRecipe::Box { lower: 0.2, upper: 0.5 },
        ];
        for seed in 0..50 {
            let mut c = cfg(all.clone(), seed);
            c.dimension = 2 + (seed as usize % 5);
            c.kappa = (1.0, 1e3);
            let p = generate(&c).unwrap();
            assert_eq!(p.constraints().len(), 3 + 2 * c.dimension);
            for v in p.constraints().values(p.anchor(), false).unwrap() {
                assert!(v <= -0.09, "seed {seed}: {v}");
            }
        }
    }

    #[test]
    fn condition_numbers_in_range() {
        let mut c = cfg(vec![], 9);
        c.dimension = 6;
        c.peaks = (3, 2);
        c.kappa = (10.0, 1e4);
        let p = generate(&c).unwrap();
        for obj in p.objectives() {
            for peak in obj.peaks() {
                let k = peak.hessian().condition_number();
                assert!(k >= 10.0 * (1.0 - 1e-6) && k <= 1e4 * (1.0 + 1e-6), "{k}");
            }
        }
    }

    #[test]
    fn deterministic() {
        let c = cfg(vec![ConstraintRecipe::Linear, ConstraintRecipe::Quadratic], 42);
        let a = generate(&c).unwrap();
        let b = generate(&c).unwrap();
        let x = a.anchor();
        assert_eq!(a.evaluate(x).unwrap(), b.evaluate(x).unwrap());
        let d = generate(&cfg(vec![ConstraintRecipe::Linear, ConstraintRecipe::Quadratic], 43)).unwrap();
        assert_ne!(a.objective(0).peaks()[0].center(), d.objective(0).peaks()[0].center());
    }

    #[test]
    fn without_anchor_mode() {
        let mut c = cfg(vec![ConstraintRecipe::Quadratic, ConstraintRecipe::Linear], 5);
        c.feasibility = FeasibilityMode::None;
        match generate(&c) {
            Ok(p) => assert!(p.total_violation(p.anchor()).unwrap() <= 1e-8),
            Err(e) => assert!(matches!(e, CobiError::Generation(_))),
        }
    }
}
