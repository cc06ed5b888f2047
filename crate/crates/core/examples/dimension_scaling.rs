//! Hypervolume gap of NSGA-II over dimension on the single-peak family with
//! one linear and one quadratic constraint. Pass `--quick` for a short run.

use cobi::baseline::{dimension_scaling_experiment, ScalingConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = ScalingConfig::single_peak_family(2024);
    if std::env::args().any(|a| a == "--quick") {
        cfg.repetitions = 3;
        cfg.budget = 2_000;
        cfg.target_size = 300;
    }
    let report = dimension_scaling_experiment(&cfg)?;
    println!("{:>4} {:>22} {:>12} {:>12}", "n", "epsilon range", "mean gap", "median gap");
    for d in &report.dims {
        let eps = d.runs.iter().map(|r| r.calibration.epsilon);
        let (lo, hi) = eps.fold((f64::INFINITY, 0.0f64), |(l, h), e| (l.min(e), h.max(e)));
        println!(
            "{:>4} {:>10.3e}..{:<10.3e} {:>12.6} {:>12.6}",
            d.dimension, lo, hi, d.mean_final_gap, d.final_gaps[d.median_run]
        );
    }
    println!("\nmean gap trace (evals, n=2 / n=10 / n=40):");
    for i in 0..report.dims[0].mean_trace.len() {
        let row: Vec<String> = report.dims.iter().map(|d| format!("{:.4}", d.mean_trace[i].mean_gap)).collect();
        println!("{:>6}  {}", report.dims[0].mean_trace[i].evals, row.join("  "));
    }
    Ok(())
}
