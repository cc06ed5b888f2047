//! Hypervolume-gap scaling of a baseline optimizer over search-space dimension.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::nsga2::run_nsga2_lite;
use super::trace::{HvReference, RunTrace};
use crate::error::{CobiError, Result};
use crate::generator::{generate, ConstraintRecipe, GeneratorConfig};
use crate::pareto::{approx_ps, ParetoApproximation};
use crate::parallel;
use crate::problem::CobiProblem;

#[derive(Clone, Debug, Serialize)]
pub struct ScalingConfig {
    /// Instance family; its dimension is replaced per run.
    pub family: GeneratorConfig,
    pub dims: Vec<usize>,
    pub repetitions: usize,
    pub budget: usize,
    pub population: usize,
    /// Reference archives are calibrated to this size.
    pub target_size: usize,
    /// Relative band around `target_size`.
    pub size_tolerance: f64,
}

impl ScalingConfig {
    /// Single peak per objective, one linear and one quadratic constraint.
    pub fn single_peak_family(seed: u64) -> Self {
        let mut family = GeneratorConfig::new(2, seed);
        family.constraints = vec![ConstraintRecipe::Linear, ConstraintRecipe::Quadratic];
        family.kappa = (1.0, 10.0);
        ScalingConfig {
            family,
            dims: vec![2, 10, 40],
            repetitions: 15,
            budget: 10_000,
            population: 100,
            target_size: 2_000,
            size_tolerance: 0.05,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub epsilon: f64,
    pub size: usize,
    pub steps: usize,
}

/// Bisects ε (in log scale) until the reference archive size lies within
/// `target · (1 ± tol)`.
pub fn calibrate_epsilon(prob: &CobiProblem, target: usize, tol: f64) -> Result<(Calibration, ParetoApproximation)> {
    let lo_size = (target as f64 * (1.0 - tol)).ceil() as usize;
    let hi_size = (target as f64 * (1.0 + tol)).floor() as usize;
    // ε too small gives too many points; ε too large too few.
    let (mut small, mut large) = (0.0f64, f64::INFINITY);
    let mut eps = 1.0;
    for steps in 1..=60 {
        let approx = approx_ps(prob, eps)?;
        let size = approx.archive.len();
        if (lo_size..=hi_size).contains(&size) {
            return Ok((Calibration { epsilon: eps, size, steps }, approx));
        }
        if size > hi_size {
            small = eps;
        } else {
            large = eps;
        }
        // Size scales roughly like 1/ε; use that guess while it stays in the bracket.
        let guess = eps * size.max(1) as f64 / target as f64;
        eps = if guess > small && guess < large && size > 2 {
            guess
        } else if large.is_finite() && small > 0.0 {
            (small * large).sqrt()
        } else if large.is_finite() {
            large / 10.0
        } else {
            small * 10.0
        };
    }
    Err(CobiError::Experiment(format!("could not calibrate the reference archive to {target} points")))
}

#[derive(Clone, Debug, Serialize)]
pub struct MeanSample {
    pub evals: usize,
    pub mean_hv: f64,
    pub mean_gap: f64,
}

/// One instance of the family, its calibrated reference set and one NSGA-II run.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    /// Seeds both the instance draw and the optimizer.
    pub seed: u64,
    pub instance_id: String,
    pub calibration: Calibration,
    pub reference: HvReference,
    pub final_gap: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionReport {
    pub dimension: usize,
    pub runs: Vec<RunRecord>,
    pub mean_trace: Vec<MeanSample>,
    pub final_gaps: Vec<f64>,
    pub mean_final_gap: f64,
    /// Run whose final gap is the median.
    pub median_run: usize,
    /// Archive of the median run projected onto `(x1, x2)`, with objectives.
    #[serde(skip)]
    pub median_projection: Vec<[f64; 4]>,
    /// Reference set of the median run's instance, projected the same way.
    #[serde(skip)]
    pub reference_projection: Vec<[f64; 4]>,
}

impl DimensionReport {
    pub fn projection_csv(&self) -> String {
        projection_csv(&self.median_projection)
    }

    pub fn reference_projection_csv(&self) -> String {
        projection_csv(&self.reference_projection)
    }
}

fn projection_csv(rows: &[[f64; 4]]) -> String {
    let mut out = String::from("x1,x2,f1,f2\n");
    for r in rows {
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", r[0], r[1], r[2], r[3]);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub budget: usize,
    pub population: usize,
    pub repetitions: usize,
    pub target_size: usize,
    pub dims: Vec<DimensionReport>,
}

impl ScalingReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn mean_final_gaps(&self) -> Vec<f64> {
        self.dims.iter().map(|d| d.mean_final_gap).collect()
    }
}

fn project_xy(entries: &[crate::archive::ArchiveEntry]) -> Vec<[f64; 4]> {
    entries
        .iter()
        .filter_map(|e| e.x.as_ref().map(|x| [x[0], x[1], e.f.f1, e.f.f2]))
        .collect()
}

fn mean_trace(traces: &[RunTrace]) -> Vec<MeanSample> {
    let k = traces.len() as f64;
    (0..traces[0].samples.len())
        .map(|i| MeanSample {
            evals: traces[0].samples[i].evals,
            mean_hv: traces.iter().map(|t| t.samples[i].hv).sum::<f64>() / k,
            mean_gap: traces.iter().map(|t| t.samples[i].gap).sum::<f64>() / k,
        })
        .collect()
}

struct SingleRun {
    record: RunRecord,
    trace: RunTrace,
    projection: Vec<[f64; 4]>,
    reference_projection: Vec<[f64; 4]>,
}

fn single_run(family: &GeneratorConfig, cfg: &ScalingConfig, seed: u64) -> Result<SingleRun> {
    let mut family = family.clone();
    family.seed = seed;
    let prob = generate(&family)?;
    let (calibration, approx) = calibrate_epsilon(&prob, cfg.target_size, cfg.size_tolerance)?;
    let reference = HvReference::from_approximation(&approx)?;
    let run = run_nsga2_lite(&prob, &reference, cfg.population, cfg.budget, seed)?;
    Ok(SingleRun {
        record: RunRecord {
            seed,
            instance_id: prob.meta.id.clone(),
            calibration,
            reference,
            final_gap: run.trace.final_gap(),
        },
        projection: project_xy(run.archive.entries()),
        reference_projection: project_xy(approx.archive.entries()),
        trace: run.trace,
    })
}

/// For each dimension, `repetitions` runs; run `r` draws its own instance of
/// the family and seeds NSGA-II, both with `family.seed ^ r`, against a
/// reference set calibrated to `target_size` points. Averaging over instances
/// keeps one unlucky draw from deciding the trend.
pub fn dimension_scaling_experiment(cfg: &ScalingConfig) -> Result<ScalingReport> {
    if cfg.repetitions == 0 || cfg.dims.is_empty() {
        return Err(CobiError::Experiment("need at least one dimension and one repetition".into()));
    }
    let mut dims = Vec::with_capacity(cfg.dims.len());
    for &n in &cfg.dims {
        let mut family = cfg.family.clone();
        family.dimension = n;
        let mut runs = parallel::install(|| {
            (0..cfg.repetitions)
                .into_par_iter()
                .map(|r| single_run(&family, cfg, cfg.family.seed ^ r as u64))
                .collect::<Result<Vec<_>>>()
        })?;
        let final_gaps: Vec<f64> = runs.iter().map(|r| r.record.final_gap).collect();
        let mut order: Vec<usize> = (0..runs.len()).collect();
        order.sort_by(|&a, &b| final_gaps[a].total_cmp(&final_gaps[b]).then(a.cmp(&b)));
        let median_run = order[(order.len() - 1) / 2];
        let traces: Vec<RunTrace> = runs.iter().map(|r| r.trace.clone()).collect();
        let median_projection = std::mem::take(&mut runs[median_run].projection);
        let reference_projection = std::mem::take(&mut runs[median_run].reference_projection);
        dims.push(DimensionReport {
            dimension: n,
            mean_final_gap: final_gaps.iter().sum::<f64>() / final_gaps.len() as f64,
            mean_trace: mean_trace(&traces),
            final_gaps,
            median_run,
            median_projection,
            reference_projection,
            runs: runs.into_iter().map(|r| r.record).collect(),
        });
    }
    Ok(ScalingReport {
        budget: cfg.budget,
        population: cfg.population,
        repetitions: cfg.repetitions,
        target_size: cfg.target_size,
        dims,
    })
}
