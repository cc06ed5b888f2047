use super::*;
use crate::archive::nondominated_filter;
use crate::constraint::{
    Constraint, ConstraintSet, ConvexConstraint, ConvexSelection, LinearConstraint, MultipeakConstraint,
    QuadraticConstraint,
};
use crate::dominance::{dominates, Dominance, ObjectivePair};
use crate::objective::{MultipeakObjective, QuadraticPeak};
use crate::problem::{point, CobiProblem, ProblemMeta, SearchBox};
use crate::transform::{MonotoneTransform, SignPreservingTransform};

fn spheres() -> [MultipeakObjective; 2] {
    [
        MultipeakObjective::single(QuadraticPeak::sphere(&[0.0, 0.0])),
        MultipeakObjective::single(QuadraticPeak::sphere(&[1.0, 0.0])),
    ]
}

fn problem(objectives: [MultipeakObjective; 2], constraints: Vec<Constraint>, anchor: &[f64]) -> CobiProblem {
    let cs = ConstraintSet::new(2, constraints).unwrap();
    CobiProblem::new(objectives, cs, point(anchor), SearchBox::cube(2, -3.0, 4.0).unwrap(), ProblemMeta::default())
        .unwrap()
}

fn lin(a: &[f64], b: f64) -> LinearConstraint {
    LinearConstraint::new(point(a), b).unwrap()
}

#[test]
fn singlepeak_unconstrained_is_schedule() {
    let [a, b] = spheres();
    let (p1, p2) = (&a.peaks()[0], &b.peaks()[0]);
    let run = approx_ps_singlepeak(p1, p2, &ConvexSelection::unconstrained(2), 0.25);
    let sched = epsilon_weights(p1, p2, 0.25);
    assert_eq!(run.points.len(), sched.len());
    for ((x, _), t) in run.points.iter().zip(&sched.weights) {
        assert_eq!(*x, unconstrained_point(p1, p2, *t));
    }
}

#[test]
fn singlepeak_half_plane_collapses() {
    let [a, b] = spheres();
    let sel = ConvexSelection::new(2, vec![ConvexConstraint::from(lin(&[1.0, 0.0], -0.5))]).unwrap();
    let run = approx_ps_singlepeak(&a.peaks()[0], &b.peaks()[0], &sel, 0.25);
    let xs: Vec<f64> = run.points.iter().map(|(x, _)| x[0]).collect();
    for (x, want) in xs.iter().zip([0.5, 0.5, 0.5, 0.25, 0.0]) {
        assert!((x - want).abs() < 1e-9, "{xs:?}");
    }
    assert_eq!(run.skipped, 0);
}

#[test]
fn singlepeak_empty_selection() {
    let [a, b] = spheres();
    let sel = ConvexSelection::new(
        2,
        vec![
            QuadraticConstraint::ball(&[0.0, 0.0], 1.0).unwrap().into(),
            QuadraticConstraint::ball(&[5.0, 0.0], 1.0).unwrap().into(),
        ],
    )
    .unwrap();
    let run = approx_ps_singlepeak(&a.peaks()[0], &b.peaks()[0], &sel, 0.1);
    assert!(run.points.is_empty() && run.empty);
}

#[test]
fn approx_unconstrained_segment() {
    let prob = CobiProblem::unconstrained(spheres(), ProblemMeta::default()).unwrap();
    let ps = approx_ps(&prob, 0.25).unwrap();
    assert_eq!(ps.len(), 5);
    assert!(!ps.degenerate);
    assert_eq!(ps.ideal, ObjectivePair::new(0.0, 0.0));
    assert_eq!(ps.nadir, ObjectivePair::new(0.5, 0.5));
    assert!(approx_ps(&prob, 0.0).is_err());
    assert!(approx_ps(&prob, f64::NAN).is_err());
}

#[test]
fn ideal_nadir_single_point_front() {
    let prob = problem(spheres(), vec![lin(&[1.0, 0.0], 0.0).into()], &[-1.0, 0.0]);
    let ps = approx_ps(&prob, 0.1).unwrap();
    assert_eq!(ps.ideal, ObjectivePair::new(0.0, 0.5));
    assert_eq!(ps.nadir, ObjectivePair::new(0.0, 0.5));
    assert_eq!(ps.len(), 1);
}

fn nd_by_brute_force(cands: &[(crate::linalg::Point, ObjectivePair)]) -> Vec<ObjectivePair> {
    let fs: Vec<ObjectivePair> = cands.iter().map(|c| c.1).collect();
    let mut nd = nondominated_filter(&fs);
    nd.sort_by(|a, b| a.f1.total_cmp(&b.f1));
    nd.dedup_by(|a, b| (a.f1 - b.f1).abs() <= DUPLICATE_TOL && (a.f2 - b.f2).abs() <= DUPLICATE_TOL);
    nd
}

/// Runs every key independently and evaluates the union under the full objectives.
fn union_of_keys(prob: &CobiProblem, eps: f64) -> Vec<(crate::linalg::Point, ObjectivePair)> {
    let sels = prob.constraints().convex_selections();
    let mut out = Vec::new();
    for k in subproblem_keys(prob) {
        let run = approx_ps_singlepeak(
            &prob.objective(0).peaks()[k.peak1],
            &prob.objective(1).peaks()[k.peak2],
            &sels[k.selection],
            eps,
        );
        for (x, _) in run.points {
            let f = prob.ranking_objectives(&x).unwrap();
            out.push((x, f));
        }
    }
    out
}

#[test]
fn multipeak_objective_merge() {
    let f1 = MultipeakObjective::new(
        vec![QuadraticPeak::sphere(&[0.0, 0.0]), QuadraticPeak::sphere(&[3.0, 0.0])],
        MonotoneTransform::Identity,
    )
    .unwrap();
    let f2 = MultipeakObjective::single(QuadraticPeak::sphere(&[1.0, 0.0]));
    let prob = CobiProblem::unconstrained([f1, f2], ProblemMeta::default()).unwrap();
    let ps = approx_ps(&prob, 0.05).unwrap();
    assert!(ps.archive.is_consistent());
    let union = union_of_keys(&prob, 0.05);
    assert_eq!(ps.archive.objectives(), nd_by_brute_force(&union));

    // No grid point dominates an archive point by more than the tolerance.
    let grid: Vec<ObjectivePair> = (0..=200)
        .flat_map(|i| (0..=100).map(move |j| (i, j)))
        .map(|(i, j)| point(&[-1.0 + 5.0 * i as f64 / 200.0, -1.0 + 2.0 * j as f64 / 100.0]))
        .map(|x| prob.raw_objectives(&x).unwrap())
        .collect();
    for a in ps.archive.objectives() {
        assert!(!grid.iter().any(|g| g.f1 < a.f1 - 1e-3 && g.f2 < a.f2 - 1e-3));
    }
}

#[test]
fn multipeak_constraint_merge() {
    let parts = vec![
        (ConvexConstraint::from(QuadraticConstraint::ball(&[0.0, 1.0], 0.4).unwrap()), SignPreservingTransform::Identity),
        (ConvexConstraint::from(QuadraticConstraint::ball(&[0.5, -0.8], 0.3).unwrap()), SignPreservingTransform::Identity),
        (ConvexConstraint::from(lin(&[-1.0, 0.0], 0.9)), SignPreservingTransform::Identity),
    ];
    let c = MultipeakConstraint::new(parts).unwrap();
    let prob = problem(spheres(), vec![c.into()], &[0.0, 1.0]);
    assert_eq!(prob.constraints().selection_count(), 3);
    let ps = approx_ps(&prob, 0.02).unwrap();
    let union = union_of_keys(&prob, 0.02);
    assert_eq!(ps.archive.objectives(), nd_by_brute_force(&union));
    // Every archive point comes from some key.
    for e in ps.archive.entries() {
        let x = e.x.as_ref().unwrap();
        assert!(union.iter().any(|(y, _)| y == x));
        assert!(prob.total_violation(x).unwrap() <= 1e-8);
    }
    // Extremes match the archive.
    let ideal = ps.archive.ideal().unwrap();
    let nadir = ps.archive.nadir().unwrap();
    assert!((ps.ideal.f1 - ideal.f1).abs() <= 1e-6 && (ps.ideal.f2 - ideal.f2).abs() <= 1e-6);
    assert!((ps.nadir.f1 - nadir.f1).abs() <= 1e-6 && (ps.nadir.f2 - nadir.f2).abs() <= 1e-6);
}

#[test]
fn objective_transforms_keep_points() {
    let base = problem(
        spheres(),
        vec![lin(&[1.0, 1.0], -0.4).into(), QuadraticConstraint::ball(&[0.0, 0.0], 0.9).unwrap().into()],
        &[0.0, 0.0],
    );
    let [a, b] = spheres();
    let transformed = base
        .with_objectives([
            a.with_outer_transform(MonotoneTransform::Power { exponent: 0.5 }).unwrap(),
            b.with_outer_transform(MonotoneTransform::Power { exponent: 2.0 }).unwrap(),
        ])
        .unwrap();
    let mut cs = base.constraints().clone();
    cs.constraints_mut()[0].transform = SignPreservingTransform::BinaryStep;
    cs.constraints_mut()[1].transform = SignPreservingTransform::PositiveScale { factor: 7.0 };
    let transformed = transformed.with_constraints(cs).unwrap();
    let p = approx_ps(&base, 0.05).unwrap();
    let q = approx_ps(&transformed, 0.05).unwrap();
    let xs = |a: &ParetoApproximation| a.archive.points().cloned().collect::<Vec<_>>();
    assert_eq!(xs(&p), xs(&q));
    assert!(p.len() > 5);
}

#[test]
fn run_summary_json() {
    let prob = CobiProblem::unconstrained(spheres(), ProblemMeta { id: "seg".into(), ..Default::default() }).unwrap();
    let ps = approx_ps(&prob, 0.25).unwrap();
    let s = RunSummary::new("seg", &ps);
    let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
    assert_eq!(v["archive_size"], 5);
    assert_eq!(v["per_key_point_counts"][0]["points"], 5);
    assert_eq!(v["skipped_weights"], 0);
    assert_eq!(dominates(&ps.ideal, &ps.nadir), Dominance::Dominates);
}

#[test]
fn interleaved_subfronts_keep_no_dominated_stretch() {
    use crate::generator::{generate, ConstraintRecipe, GeneratorConfig};
    // Two sub-fronts that nearly coincide in objective space for this seed.
    let mut cfg = GeneratorConfig::new(2, 314);
    cfg.peaks = (3, 2);
    cfg.constraints = ConstraintRecipe::parse_list("multipeak:lq").unwrap();
    cfg.kappa = (1.0, 20.0);
    let prob = generate(&cfg).unwrap();
    let coarse = approx_ps(&prob, 0.01).unwrap();
    let fine = approx_ps(&prob, 0.0005).unwrap().archive.objectives();
    for p in coarse.archive.objectives() {
        for q in &fine {
            let gain = (p.f1 - q.f1).min(p.f2 - q.f2);
            assert!(gain < 1e-4, "{p:?} beaten by {q:?}");
        }
    }
    // the fine set keeps the coarse extremes
    assert_eq!(coarse.archive.ideal(), approx_ps(&prob, 0.0005).unwrap().archive.ideal());
}
