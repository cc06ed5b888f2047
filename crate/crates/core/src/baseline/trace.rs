use std::fmt::Write as _;

use serde::Serialize;

use crate::archive::BiArchive;
use crate::dominance::ObjectivePair;
use crate::error::{CobiError, Result};
use crate::hypervolume::hypervolume;
use crate::pareto::ParetoApproximation;
use crate::problem::CobiProblem;

/// Hypervolume in objective space rescaled so that the reference ideal maps
/// to (0, 0) and the nadir to (1, 1); the nadir is the reference point.
#[derive(Clone, Debug, Serialize)]
pub struct HvReference {
    pub ideal: ObjectivePair,
    pub nadir: ObjectivePair,
    /// Normalized hypervolume of the inner corners `(f1_i, f2_{i+1})` of the
    /// sorted reference front. Every feasible point is dominated by one of
    /// them, so gaps measured against it are non-negative.
    pub hv: f64,
    /// Normalized hypervolume of the reference points themselves.
    pub hv_points: f64,
}

impl HvReference {
    pub fn new(ideal: ObjectivePair, nadir: ObjectivePair, reference_front: &[ObjectivePair]) -> Result<Self> {
        if !(nadir.f1 > ideal.f1 && nadir.f2 > ideal.f2) {
            return Err(CobiError::Experiment(format!(
                "reference front is degenerate: ideal ({}, {}) nadir ({}, {})",
                ideal.f1, ideal.f2, nadir.f1, nadir.f2
            )));
        }
        let mut r = HvReference { ideal, nadir, hv: 0.0, hv_points: 0.0 };
        let mut front = reference_front.to_vec();
        front.sort_by(|a, b| a.f1.total_cmp(&b.f1).then(a.f2.total_cmp(&b.f2)));
        let mut corners: Vec<ObjectivePair> =
            front.windows(2).map(|w| ObjectivePair::new(w[0].f1, w[1].f2)).collect();
        corners.extend(front.first().copied());
        corners.extend(front.last().copied());
        r.hv = r.normalized_hv(&corners);
        r.hv_points = r.normalized_hv(&front);
        Ok(r)
    }

    pub fn from_approximation(approx: &ParetoApproximation) -> Result<Self> {
        if approx.degenerate {
            return Err(CobiError::Experiment("reference set is missing (degenerate approximation)".into()));
        }
        Self::new(approx.ideal, approx.nadir, &approx.archive.objectives())
    }

    pub fn normalize(&self, f: ObjectivePair) -> ObjectivePair {
        ObjectivePair::new(
            (f.f1 - self.ideal.f1) / (self.nadir.f1 - self.ideal.f1),
            (f.f2 - self.ideal.f2) / (self.nadir.f2 - self.ideal.f2),
        )
    }

    pub fn normalized_hv(&self, front: &[ObjectivePair]) -> f64 {
        let pts: Vec<ObjectivePair> = front.iter().map(|&f| self.normalize(f)).collect();
        hypervolume(&pts, ObjectivePair::new(1.0, 1.0))
    }

    pub fn archive_hv(&self, archive: &BiArchive) -> f64 {
        self.normalized_hv(&archive.objectives())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceSample {
    pub evals: usize,
    pub hv: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunTrace {
    pub instance_id: String,
    pub optimizer: String,
    pub seed: u64,
    pub budget: usize,
    pub samples: Vec<TraceSample>,
}

impl RunTrace {
    pub fn final_gap(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.gap)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("evals,hv,gap\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{:.16e},{:.16e}", s.evals, s.hv, s.gap);
        }
        out
    }
}

/// 1, 2, 5, 10, 20, 50, … up to and including `budget`.
pub fn checkpoints(budget: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut decade = 1usize;
    'outer: loop {
        for m in [1, 2, 5] {
            let c = m * decade;
            if c >= budget {
                break 'outer;
            }
            out.push(c);
        }
        decade = match decade.checked_mul(10) {
            Some(d) => d,
            None => break,
        };
    }
    out.push(budget);
    out
}

/// Counts evaluations, keeps the all-time feasible non-dominated archive and
/// samples the trace at the checkpoints.
pub(super) struct Recorder<'a> {
    prob: &'a CobiProblem,
    reference: &'a HvReference,
    pub archive: BiArchive,
    pub evals: usize,
    checkpoints: Vec<usize>,
    next: usize,
    pub samples: Vec<TraceSample>,
}

impl<'a> Recorder<'a> {
    pub fn new(prob: &'a CobiProblem, reference: &'a HvReference, budget: usize) -> Self {
        Recorder {
            prob,
            reference,
            archive: BiArchive::new(),
            evals: 0,
            checkpoints: checkpoints(budget),
            next: 0,
            samples: Vec::new(),
        }
    }

    /// Evaluates `x` and returns its objectives and total violation.
    pub fn evaluate(&mut self, x: &crate::linalg::Point) -> (ObjectivePair, f64) {
        self.evals += 1;
        let violation = self.prob.total_violation(x).unwrap_or(f64::INFINITY);
        let f = self
            .prob
            .ranking_objectives(x)
            .unwrap_or(ObjectivePair::new(f64::INFINITY, f64::INFINITY));
        if violation <= crate::constraint::FEASIBILITY_TOL && f.is_finite() {
            self.archive.insert(f, Some(x.clone()));
        }
        while self.next < self.checkpoints.len() && self.checkpoints[self.next] == self.evals {
            let hv = self.reference.archive_hv(&self.archive);
            self.samples.push(TraceSample { evals: self.evals, hv, gap: self.reference.hv - hv });
            self.next += 1;
        }
        (f, violation)
    }

    pub fn finish(self, optimizer: &str, seed: u64, budget: usize) -> (RunTrace, BiArchive) {
        let trace = RunTrace {
            instance_id: self.prob.meta.id.clone(),
            optimizer: optimizer.to_string(),
            seed,
            budget,
            samples: self.samples,
        };
        (trace, self.archive)
    }
}
