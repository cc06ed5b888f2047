use rayon::prelude::*;
use serde::Serialize;

use super::extremes::{ideal_nadir, Extremes, SubproblemExtreme};
use super::weights::{epsilon_weights, WeightSchedule};
use crate::archive::BiArchive;
use crate::constraint::ConvexSelection;
use crate::dominance::ObjectivePair;
use crate::error::{CobiError, Result};
use crate::linalg::Point;
use crate::objective::QuadraticPeak;
use crate::parallel;
use crate::problem::CobiProblem;
use crate::projection::{build_scalarized, project_from, strictly_feasible_point, ProjectionStatus};

/// Candidates whose objectives are this close to an archived entry, in both
/// components, are dropped.
pub const DUPLICATE_TOL: f64 = 1e-12;
/// Relative amount a chord must win by, in both objectives, to drop a point.
const CHORD_MARGIN: f64 = 1e-9;

/// One peak of `f1`, one peak of `f2` and one convex selection of the constraints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubproblemKey {
    pub peak1: usize,
    pub peak2: usize,
    pub selection: usize,
}

/// Keys in lexicographic order.
pub fn subproblem_keys(prob: &CobiProblem) -> Vec<SubproblemKey> {
    let s1 = prob.objective(0).peaks().len();
    let s2 = prob.objective(1).peaks().len();
    let sel = prob.constraints().selection_count();
    let mut keys = Vec::with_capacity(s1 * s2 * sel);
    for peak1 in 0..s1 {
        for peak2 in 0..s2 {
            for selection in 0..sel {
                keys.push(SubproblemKey { peak1, peak2, selection });
            }
        }
    }
    keys
}

#[derive(Clone, Debug, Default)]
pub struct SinglePeakRun {
    /// Points with the pair's own objective values, in weight order.
    pub points: Vec<(Point, ObjectivePair)>,
    /// Weights whose projection did not succeed.
    pub skipped: usize,
    pub schedule_len: usize,
    pub stitch_iterations: usize,
    /// The selection has no feasible point.
    pub empty: bool,
    /// Solutions at weight 1 (best for `f1`) and weight 0 (best for `f2`).
    pub best_f1: Option<Point>,
    pub best_f2: Option<Point>,
}

fn pair_values(p1: &QuadraticPeak, p2: &QuadraticPeak, x: &Point) -> ObjectivePair {
    ObjectivePair::new(p1.quadratic_form(x) + p1.offset(), p2.quadratic_form(x) + p2.offset())
}

/// Feasibility of a selection: `Some(start)` with a point to start interior
/// paths from, or `None` if the selection is empty.
fn probe_selection(sel: &ConvexSelection, peak1: &QuadraticPeak, peak2: &QuadraticPeak, hint: &Point) -> Option<Point> {
    if sel.is_empty() {
        return Some(hint.clone());
    }
    if let Some(x) = strictly_feasible_point(sel, hint) {
        return Some(x);
    }
    if sel.is_linear() {
        // Feasible sets without interior still admit projections.
        let sp = build_scalarized(peak1, peak2, 0.5, sel).ok()?;
        let r = project_from(&sp, None);
        if r.status != ProjectionStatus::InfeasibleWithinTolerance && r.violation <= crate::projection::VIOLATION_TOL {
            return Some(r.x_star);
        }
    }
    None
}

fn run_schedule(
    peak1: &QuadraticPeak,
    peak2: &QuadraticPeak,
    sel: &ConvexSelection,
    schedule: &WeightSchedule,
    start: Option<&Point>,
) -> SinglePeakRun {
    let mut run = SinglePeakRun {
        schedule_len: schedule.len(),
        stitch_iterations: schedule.stitch_iterations,
        ..Default::default()
    };
    let Some(start) = start else {
        run.empty = true;
        return run;
    };
    for &theta in &schedule.weights {
        let sp = build_scalarized(peak1, peak2, theta, sel).expect("dimensions checked by the problem");
        let x = if sel.max_value(sp.center()) <= 0.0 {
            sp.center().clone()
        } else {
            let r = project_from(&sp, Some(start));
            if !r.is_optimal() {
                run.skipped += 1;
                continue;
            }
            r.x_star
        };
        if theta == 1.0 {
            run.best_f1 = Some(x.clone());
        }
        if theta == 0.0 {
            run.best_f2 = Some(x.clone());
        }
        let f = pair_values(peak1, peak2, &x);
        run.points.push((x, f));
    }
    run
}

/// ε-approximation for one pair of peaks on one convex selection: feasible
/// scalarized optima are kept, the others replaced by their projections.
pub fn approx_ps_singlepeak(
    peak1: &QuadraticPeak,
    peak2: &QuadraticPeak,
    selection: &ConvexSelection,
    epsilon: f64,
) -> SinglePeakRun {
    singlepeak_with_schedule(peak1, peak2, selection, &epsilon_weights(peak1, peak2, epsilon))
}

fn singlepeak_with_schedule(
    peak1: &QuadraticPeak,
    peak2: &QuadraticPeak,
    selection: &ConvexSelection,
    schedule: &WeightSchedule,
) -> SinglePeakRun {
    let hint = super::weights::unconstrained_point(peak1, peak2, 0.5);
    let start = probe_selection(selection, peak1, peak2, &hint);
    run_schedule(peak1, peak2, selection, schedule, start.as_ref())
}

/// Ideal and nadir from the weight-0 and weight-1 solutions of every key,
/// without sampling the rest of the Pareto set.
pub fn compute_extremes(prob: &CobiProblem) -> Result<Extremes> {
    let peaks1 = prob.objective(0).peaks();
    let peaks2 = prob.objective(1).peaks();
    let selections = prob.constraints().convex_selections();
    let keys = subproblem_keys(prob);
    let ends = WeightSchedule { weights: vec![0.0, 1.0], epsilon: f64::INFINITY, stitch_iterations: 0 };
    let runs: Vec<SinglePeakRun> = parallel::install(|| {
        keys.par_iter()
            .map(|k| singlepeak_with_schedule(&peaks1[k.peak1], &peaks2[k.peak2], &selections[k.selection], &ends))
            .collect()
    });
    let extremes: Vec<SubproblemExtreme> = keys
        .iter()
        .zip(runs)
        .map(|(k, r)| SubproblemExtreme { key: *k, best_f1: r.best_f1, best_f2: r.best_f2 })
        .collect();
    ideal_nadir(prob, &extremes)
}

#[derive(Clone, Debug, Serialize)]
pub struct SubproblemReport {
    pub key: SubproblemKey,
    pub points: usize,
    pub skipped: usize,
    pub schedule_len: usize,
    pub stitch_iterations: usize,
    pub empty: bool,
}

#[derive(Clone, Debug)]
pub struct ParetoApproximation {
    pub archive: BiArchive,
    pub epsilon: f64,
    pub ideal: ObjectivePair,
    pub nadir: ObjectivePair,
    /// No subproblem produced a point; the archive holds only the anchor.
    pub degenerate: bool,
    pub subproblems: Vec<SubproblemReport>,
    /// Ideal and nadir come from the archive because no key had both extremes.
    pub extremes_from_archive: bool,
    pub extremes: Option<Extremes>,
}

impl ParetoApproximation {
    pub fn skipped_weights(&self) -> usize {
        self.subproblems.iter().map(|s| s.skipped).sum()
    }

    pub fn len(&self) -> usize {
        self.archive.len()
    }

    pub fn is_empty(&self) -> bool {
        self.archive.is_empty()
    }
}

/// Reference approximation of the whole problem: every pair of peaks on every
/// convex selection, merged into one non-dominated archive keyed by the full
/// objectives. Subproblems run in parallel; the merge follows key order.
pub fn approx_ps(prob: &CobiProblem, epsilon: f64) -> Result<ParetoApproximation> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(CobiError::InvalidArgument(format!("epsilon must be positive and finite, got {epsilon}")));
    }
    let peaks1 = prob.objective(0).peaks();
    let peaks2 = prob.objective(1).peaks();
    let selections = prob.constraints().convex_selections();
    let keys = subproblem_keys(prob);

    let runs: Vec<SinglePeakRun> = parallel::install(|| {
        let pairs: Vec<(usize, usize)> =
            (0..peaks1.len()).flat_map(|i| (0..peaks2.len()).map(move |j| (i, j))).collect();
        let schedules: Vec<WeightSchedule> =
            pairs.par_iter().map(|&(i, j)| epsilon_weights(&peaks1[i], &peaks2[j], epsilon)).collect();
        keys.par_iter()
            .map(|k| {
                let schedule = &schedules[k.peak1 * peaks2.len() + k.peak2];
                singlepeak_with_schedule(&peaks1[k.peak1], &peaks2[k.peak2], &selections[k.selection], schedule)
            })
            .collect()
    });

    let mut archive = BiArchive::with_duplicate_tolerance(DUPLICATE_TOL);
    let mut subproblems = Vec::with_capacity(keys.len());
    let mut extremes_in = Vec::with_capacity(keys.len());
    let fronts: Vec<SubFront> = keys
        .iter()
        .zip(&runs)
        .filter(|(_, run)| run.points.len() >= 2)
        .map(|(k, run)| SubFront::new(&peaks1[k.peak1], &peaks2[k.peak2], &run.points))
        .collect();
    for (key, run) in keys.iter().zip(runs) {
        subproblems.push(SubproblemReport {
            key: *key,
            points: run.points.len(),
            skipped: run.skipped,
            schedule_len: run.schedule_len,
            stitch_iterations: run.stitch_iterations,
            empty: run.empty,
        });
        for (x, _) in run.points {
            let f = prob.ranking_objectives(&x)?;
            archive.insert(f, Some(x));
        }
        extremes_in.push(SubproblemExtreme { key: *key, best_f1: run.best_f1, best_f2: run.best_f2 });
    }
    if fronts.len() > 1 {
        archive = drop_chord_dominated(archive, &fronts);
    }
    let degenerate = archive.is_empty();
    if degenerate {
        let f = prob.ranking_objectives(prob.anchor())?;
        archive.insert(f, Some(prob.anchor().clone()));
    }
    let (ideal, nadir, extremes, from_archive) = match ideal_nadir(prob, &extremes_in) {
        Ok(e) => (e.ideal, e.nadir, Some(e), false),
        Err(_) => (archive.ideal().unwrap(), archive.nadir().unwrap(), None, true),
    };
    Ok(ParetoApproximation {
        archive,
        epsilon,
        ideal,
        nadir,
        degenerate,
        subproblems,
        extremes_from_archive: from_archive,
        extremes,
    })
}

/// Sampled front of one subproblem, in weight order.
///
/// Each subproblem is convex, so the set of attainable peak values plus the
/// positive orthant is convex and every chord between two sampled points is
/// weakly dominated by some feasible point. A candidate beaten by a chord in
/// both objectives is therefore not Pareto optimal, even though no sampled
/// point dominates it. This removes stretches of one sub-front that lie just
/// behind another sub-front sampled at interleaved positions.
struct SubFront<'a> {
    peak1: &'a QuadraticPeak,
    peak2: &'a QuadraticPeak,
    /// Quadratic forms `(q1, q2)` of the samples.
    forms: Vec<(f64, f64)>,
    /// Upper bounds on the ranking objectives at each sample.
    bounds: Vec<(f64, f64)>,
}

fn form_bound(p: &QuadraticPeak, q: f64) -> f64 {
    p.inner_transform().apply(q, "chord bound").map_or(f64::INFINITY, |v| v + p.offset())
}

impl<'a> SubFront<'a> {
    fn new(peak1: &'a QuadraticPeak, peak2: &'a QuadraticPeak, points: &[(Point, ObjectivePair)]) -> Self {
        let forms: Vec<(f64, f64)> =
            points.iter().map(|(x, _)| (peak1.quadratic_form(x), peak2.quadratic_form(x))).collect();
        let bounds = forms.iter().map(|&(a, b)| (form_bound(peak1, a), form_bound(peak2, b))).collect();
        SubFront { peak1, peak2, forms, bounds }
    }

    /// Whether a point on a chord of consecutive samples is below `target` in both objectives.
    fn beats(&self, target: ObjectivePair) -> bool {
        for k in 1..self.forms.len() {
            let (ba, bb) = (self.bounds[k - 1], self.bounds[k]);
            // first objective: endpoint with the smaller bound, second likewise
            let e1 = if ba.0 <= bb.0 { 0.0 } else { 1.0 };
            let e2 = if ba.1 <= bb.1 { 0.0 } else { 1.0 };
            if ba.0.min(bb.0) >= target.f1 || ba.1.min(bb.1) >= target.f2 || e1 == e2 {
                // an endpoint below in both would already dominate as a sample
                continue;
            }
            let (a, b) = (self.forms[k - 1], self.forms[k]);
            let g1 = |t: f64| form_bound(self.peak1, a.0 + t * (b.0 - a.0));
            let g2 = |t: f64| form_bound(self.peak2, a.1 + t * (b.1 - a.1));
            // s1: edge of {g1 < target.f1} grown from e1; s2 likewise from e2.
            let s1 = edge(|t| g1(t) < target.f1, e1);
            let s2 = edge(|t| g2(t) < target.f2, e2);
            let t = 0.5 * (s1 + s2);
            if (e1 == 0.0 && s2 < s1 || e1 == 1.0 && s1 < s2) && g1(t) < target.f1 && g2(t) < target.f2 {
                return true;
            }
        }
        false
    }
}

/// Furthest `t` from `from` (0 or 1) in the interval where `inside` holds,
/// assuming `inside(from)` and a single switch.
fn edge(inside: impl Fn(f64) -> bool, from: f64) -> f64 {
    let (mut good, mut bad) = (from, 1.0 - from);
    if inside(bad) {
        return bad;
    }
    for _ in 0..60 {
        let mid = 0.5 * (good + bad);
        if inside(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

fn drop_chord_dominated(archive: BiArchive, fronts: &[SubFront]) -> BiArchive {
    let entries = archive.into_entries();
    let keep: Vec<bool> = parallel::install(|| {
        entries
            .par_iter()
            .map(|e| {
                let margin = |v: f64| v - CHORD_MARGIN * (1.0 + v.abs());
                let target = ObjectivePair::new(margin(e.f.f1), margin(e.f.f2));
                !fronts.iter().any(|fr| fr.beats(target))
            })
            .collect()
    });
    let mut out = BiArchive::with_duplicate_tolerance(DUPLICATE_TOL);
    for (e, k) in entries.into_iter().zip(keep) {
        if k {
            out.insert(e.f, e.x);
        }
    }
    out
}
