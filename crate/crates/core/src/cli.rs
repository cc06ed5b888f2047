//! The `cobi` command-line interface.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 I/O error.
//! Structured results go to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::baseline::{run_nsga2_lite, run_random_search, HvReference};
use crate::classify::classify;
use crate::dominance::ObjectivePair;
use crate::error::CobiError;
use crate::generator::{
    generate, load_file, save, save_file, showcase_instance, ConstraintRecipe, FeasibilityMode, GeneratorConfig,
};
use crate::hypervolume::hypervolume;
use crate::linalg::Point;
use crate::pareto::{approx_ps, compute_extremes, read_reference_csv, reference_csv, RunSummary};
use crate::problem::CobiProblem;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) | CliError::Io(m) => m,
        }
    }
}

impl From<CobiError> for CliError {
    fn from(e: CobiError) -> Self {
        let msg = e.to_string();
        match e {
            CobiError::Io(_) => CliError::Io(msg),
            CobiError::Generation(_)
            | CobiError::Classification(_)
            | CobiError::IdealNadir(_)
            | CobiError::Experiment(_)
            | CobiError::Domain { .. } => CliError::Numerical(msg),
            _ => CliError::Validation(msg),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "cobi", version, about = "Constrained bi-objective test problems with computable Pareto sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance file from a configuration or a showcase name.
    Generate(GenerateArgs),
    /// Evaluate one point.
    Evaluate(EvaluateArgs),
    /// Compute a reference Pareto set approximation.
    ApproxPs(ApproxArgs),
    /// Ideal and nadir points.
    IdealNadir(InstanceArg),
    /// Hypervolume of a point set, optionally against a reference set.
    Hv(HvArgs),
    /// Constrained problem type (I to IV).
    Classify(ClassifyArgs),
    /// Run a baseline optimizer and write its hypervolume trace.
    RunBaseline(BaselineArgs),
    /// Grid data for search-space plots of a two-dimensional instance.
    PlotData(PlotArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// JSON generator configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in showcase instance instead of a random draw.
    #[arg(long, conflicts_with = "config")]
    showcase: Option<String>,
    /// Search-space dimension (at least 2).
    #[arg(long)]
    n: Option<usize>,
    /// Peaks per objective, e.g. `2,1`.
    #[arg(long)]
    peaks: Option<String>,
    /// Comma-separated: linear, quadratic, multipeak:<l|q>...
    #[arg(long)]
    constraints: Option<String>,
    /// Condition-number range, e.g. `1,1000`.
    #[arg(long)]
    kappa: Option<String>,
    /// Interval for center coordinates, e.g. `-1,1`.
    #[arg(long, allow_hyphen_values = true)]
    center_box: Option<String>,
    /// Range for peak offsets, e.g. `0,0.5`.
    #[arg(long, allow_hyphen_values = true)]
    offsets: Option<String>,
    /// `anchor` guarantees a feasible point; `none` draws constraints freely.
    #[arg(long, value_enum)]
    feasibility: Option<FeasibilityArg>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; the document goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FeasibilityArg {
    Anchor,
    None,
}

#[derive(Args, Debug)]
struct InstanceArg {
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Report untransformed values only.
    #[arg(long)]
    raw: bool,
}

#[derive(Args, Debug)]
struct ApproxArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Target spacing of the Pareto set approximation in decision space.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: f64,
    /// Reference-set CSV; written to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON run summary.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HvArgs {
    /// Reference-set CSV; the gap is reported against it.
    #[arg(long = "ref")]
    reference: Option<PathBuf>,
    /// CSV with `f1,f2` columns.
    #[arg(long)]
    points: PathBuf,
    /// Reference point `r1,r2`; defaults to the worst values of the reference set.
    #[arg(long, allow_hyphen_values = true)]
    refpoint: Option<String>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algo {
    Random,
    Nsga2lite,
}

#[derive(Args, Debug)]
struct BaselineArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    population: usize,
    /// Spacing of the reference set the gap is measured against.
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Trace CSV (`evals,hv,gap`); written to stdout when omitted.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 401)]
    grid: usize,
    /// Grid CSV; written to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the reference set computed with `--epsilon` here.
    #[arg(long)]
    ps: Option<PathBuf>,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

fn load_instance(path: &Path) -> CliResult<CobiProblem> {
    match load_file(path) {
        Ok((_, p)) => Ok(p),
        Err(CobiError::Io(e)) => Err(io_err(path, e)),
        Err(e) => Err(CliError::Validation(format!("{}: {e}", path.display()))),
    }
}

fn parse_floats(what: &str, s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Validation(format!("{what}: `{t}` is not a finite number")))
        })
        .collect()
}

fn parse_pair<T: std::str::FromStr>(what: &str, s: &str) -> CliResult<(T, T)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || CliError::Validation(format!("{what}: expected two comma-separated values, got `{s}`"));
    if parts.len() != 2 {
        return Err(bad());
    }
    Ok((parts[0].parse().map_err(|_| bad())?, parts[1].parse().map_err(|_| bad())?))
}

fn check_epsilon(eps: f64) -> CliResult<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("epsilon must be positive and finite, got {eps}")))
    }
}

fn emit(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json"));
}

fn cmd_generate(a: GenerateArgs) -> CliResult<()> {
    let (doc, prob) = if let Some(name) = &a.showcase {
        let p = showcase_instance(name)?;
        (save(&p), p)
    } else {
        let mut cfg = match &a.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
                serde_json::from_str::<GeneratorConfig>(&text)
                    .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?
            }
            None => GeneratorConfig::new(
                a.n.ok_or_else(|| CliError::Validation("either --config, --showcase or --n is required".into()))?,
                0,
            ),
        };
        if let Some(n) = a.n {
            cfg.dimension = n;
        }
        if let Some(s) = &a.peaks {
            cfg.peaks = parse_pair("--peaks", s)?;
        }
        if let Some(s) = &a.constraints {
            cfg.constraints = ConstraintRecipe::parse_list(s)?;
        }
        if let Some(s) = &a.kappa {
            cfg.kappa = parse_pair("--kappa", s)?;
        }
        if let Some(s) = &a.center_box {
            cfg.center_box = parse_pair("--center-box", s)?;
        }
        if let Some(s) = &a.offsets {
            cfg.offsets = parse_pair("--offsets", s)?;
        }
        if let Some(f) = a.feasibility {
            cfg.feasibility = match f {
                FeasibilityArg::Anchor => FeasibilityMode::Anchor,
                FeasibilityArg::None => FeasibilityMode::None,
            };
        }
        if let Some(seed) = a.seed {
            cfg.seed = seed;
        }
        let p = generate(&cfg)?;
        (save(&p).with_config(cfg), p)
    };
    match &a.out {
        Some(path) => {
            save_file(path, &doc).map_err(|e| match e {
                CobiError::Io(io) => io_err(path, io),
                other => other.into(),
            })?;
            emit(&json!({
                "id": prob.meta.id,
                "dimension": prob.dim(),
                "peaks": [prob.objective(0).peaks().len(), prob.objective(1).peaks().len()],
                "constraints": prob.constraints().len(),
                "out": path.display().to_string(),
            }));
        }
        None => print!("{}", doc.to_json()),
    }
    Ok(())
}

fn cmd_evaluate(a: EvaluateArgs) -> CliResult<()> {
    let prob = load_instance(&a.instance)?;
    let x = Point::from_vec(parse_floats("--x", &a.x)?);
    let e = prob.evaluate(&x)?;
    if a.raw {
        emit(&json!({ "f": e.f_raw, "g": e.g_raw, "violation": e.violation, "feasible": e.feasible }));
    } else {
        emit(&serde_json::to_value(&e).expect("json"));
    }
    Ok(())
}

fn cmd_approx(a: ApproxArgs) -> CliResult<()> {
    check_epsilon(a.epsilon)?;
    let prob = load_instance(&a.instance)?;
    let approx = approx_ps(&prob, a.epsilon)?;
    let csv = reference_csv(&approx.archive, prob.dim());
    let summary = RunSummary::new(&prob.meta.id, &approx);
    if let Some(path) = &a.summary {
        write_file(path, &(summary.to_json() + "\n"))?;
    }
    match &a.out {
        Some(path) => {
            write_file(path, &csv)?;
            println!("{}", summary.to_json());
        }
        None => print!("{csv}"),
    }
    if approx.degenerate {
        return Err(CliError::Numerical("no subproblem produced a point; archive holds only the anchor".into()));
    }
    Ok(())
}

fn cmd_ideal_nadir(a: InstanceArg) -> CliResult<()> {
    let prob = load_instance(&a.instance)?;
    let e = compute_extremes(&prob)?;
    emit(&serde_json::to_value(&e).expect("json"));
    Ok(())
}

fn read_front(path: &Path) -> CliResult<Vec<ObjectivePair>> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    read_reference_csv(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

fn cmd_hv(a: HvArgs) -> CliResult<()> {
    let points = read_front(&a.points)?;
    let reference = a.reference.as_deref().map(read_front).transpose()?;
    let refpoint = match (&a.refpoint, &reference) {
        (Some(s), _) => {
            let v = parse_floats("--refpoint", s)?;
            if v.len() != 2 {
                return Err(CliError::Validation("--refpoint needs two values".into()));
            }
            ObjectivePair::new(v[0], v[1])
        }
        (None, Some(r)) if !r.is_empty() => r.iter().fold(r[0], |m, p| m.componentwise_max(p)),
        _ => return Err(CliError::Validation("--refpoint is required without a non-empty --ref".into())),
    };
    let hv = hypervolume(&points, refpoint);
    let mut out = json!({ "hv": hv, "refpoint": refpoint, "points": points.len() });
    if let Some(r) = &reference {
        let rhv = hypervolume(r, refpoint);
        out["reference_hv"] = json!(rhv);
        out["gap"] = json!(rhv - hv);
    }
    emit(&out);
    Ok(())
}

fn cmd_classify(a: ClassifyArgs) -> CliResult<()> {
    check_epsilon(a.epsilon)?;
    let prob = load_instance(&a.instance)?;
    let c = classify(&prob, a.epsilon)?;
    emit(&json!({
        "type": c.kind.to_string(),
        "feasible_unconstrained": c.feasible_unconstrained,
        "unconstrained_points": c.unconstrained_points,
        "max_front_distance": c.max_front_distance,
        "tolerance": c.tolerance,
    }));
    Ok(())
}

fn cmd_baseline(a: BaselineArgs) -> CliResult<()> {
    check_epsilon(a.epsilon)?;
    if a.budget == 0 {
        return Err(CliError::Validation("--budget must be at least 1".into()));
    }
    let prob = load_instance(&a.instance)?;
    let approx = approx_ps(&prob, a.epsilon)?;
    let reference = HvReference::from_approximation(&approx)?;
    let run = match a.algo {
        Algo::Random => run_random_search(&prob, &reference, a.budget, a.seed, prob.search_box()),
        Algo::Nsga2lite => run_nsga2_lite(&prob, &reference, a.population, a.budget, a.seed)?,
    };
    let csv = run.trace.to_csv();
    match &a.trace {
        Some(path) => {
            write_file(path, &csv)?;
            let last = run.trace.samples.last().copied();
            emit(&json!({
                "instance_id": run.trace.instance_id,
                "optimizer": run.trace.optimizer,
                "seed": run.trace.seed,
                "budget": run.trace.budget,
                "archive_size": run.archive.len(),
                "reference_hv": reference.hv,
                "final_hv": last.map(|s| s.hv),
                "final_gap": last.map(|s| s.gap),
            }));
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_plot(a: PlotArgs) -> CliResult<()> {
    let prob = load_instance(&a.instance)?;
    if prob.dim() != 2 {
        return Err(CliError::Validation(format!("plot-data needs a two-dimensional instance, got n = {}", prob.dim())));
    }
    if a.grid < 2 {
        return Err(CliError::Validation("--grid must be at least 2".into()));
    }
    let bx = prob.search_box();
    let p = prob.constraints().len();
    let mut out = String::from("x1,x2,f1,f2");
    for k in 1..=p {
        let _ = write!(out, ",g{k}");
    }
    out.push_str(",feasible\n");
    let m = a.grid - 1;
    for i in 0..=m {
        for j in 0..=m {
            let x1 = bx.lower[0] + (bx.upper[0] - bx.lower[0]) * i as f64 / m as f64;
            let x2 = bx.lower[1] + (bx.upper[1] - bx.lower[1]) * j as f64 / m as f64;
            let e = prob.evaluate(&Point::from_vec(vec![x1, x2]))?;
            let _ = write!(out, "{x1:.16e},{x2:.16e},{:.16e},{:.16e}", e.f_raw.f1, e.f_raw.f2);
            for g in &e.g_raw {
                let _ = write!(out, ",{g:.16e}");
            }
            let _ = writeln!(out, ",{}", u8::from(e.feasible));
        }
    }
    if let Some(path) = &a.ps {
        check_epsilon(a.epsilon)?;
        let approx = approx_ps(&prob, a.epsilon)?;
        write_file(path, &reference_csv(&approx.archive, 2))?;
    }
    match &a.out {
        Some(path) => {
            write_file(path, &out)?;
            emit(&json!({ "grid": a.grid, "nodes": a.grid * a.grid, "constraints": p, "out": path.display().to_string() }));
        }
        None => print!("{out}"),
    }
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::ApproxPs(a) => cmd_approx(a),
        Command::IdealNadir(a) => cmd_ideal_nadir(a),
        Command::Hv(a) => cmd_hv(a),
        Command::Classify(a) => cmd_classify(a),
        Command::RunBaseline(a) => cmd_baseline(a),
        Command::PlotData(a) => cmd_plot(a),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
