//! Subcommand implementations. Each returns data for the caller to print;
//! artifacts are written here.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use iprox::barrier::{barrier_by_name, Barrier, Reciprocal};
use iprox::problems::{circle_starting_points, lookup, rosenbrock_instance, REGISTRY, ROSENBROCK_MINIMIZERS};
use iprox::validate::{validate_problem, ValidationOptions, ValidationReport};
use iprox::vector::dist;
use iprox::{InnerParams, OuterParams, Problem};

use crate::artifacts::{
    create_dir, fmt_f64, residual_rows, status_label, trace_rows, trajectory_rows, write_csv, write_json, RunSummary,
    Summary, BASIN_HEADER, RESIDUAL_HEADER, TRACE_HEADER, TRAJECTORY_HEADER,
};
use crate::config::{Protocol, RunConfig, TraceFormat};
use crate::error::{CliError, EXIT_NOT_CONVERGED};
use crate::runner::{Batch, Run};

/// Distance within which a limit point is attributed to a known minimizer.
pub const BASIN_RADIUS: f64 = 1e-2;

/// The two single-start runs whose residual histories are exported.
pub const RESIDUAL_STARTS: [[f64; 2]; 2] = [[0.0, 1.05], [0.25, 0.8]];

pub const CIRCLE_STARTS: usize = 20;

pub fn resolve_problem(name: &str) -> Result<Box<dyn Problem>, CliError> {
    lookup(name).ok_or_else(|| CliError::UnknownProblem(name.to_string()))
}

pub fn resolve_barrier(name: &str) -> Result<Box<dyn Barrier>, CliError> {
    barrier_by_name(name).ok_or_else(|| CliError::UnknownBarrier(name.to_string()))
}

/// 1-based index of the nearest known Rosenbrock minimizer within
/// [`BASIN_RADIUS`], with its distance.
pub fn classify_basin(x: &[f64]) -> Option<(usize, f64)> {
    ROSENBROCK_MINIMIZERS
        .iter()
        .enumerate()
        .map(|(i, m)| (i + 1, dist(x, m)))
        .filter(|&(_, d)| d <= BASIN_RADIUS)
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

fn exit_code(runs: &[Run]) -> i32 {
    if runs.iter().all(Run::converged) {
        0
    } else {
        EXIT_NOT_CONVERGED
    }
}

pub struct SolveOutcome {
    pub out_dir: PathBuf,
    pub runs: Vec<Run>,
    pub exit_code: i32,
}

/// Starting points named by the config, in order: explicit points, then the
/// protocol, then the problem's own default.
pub fn starting_points(cfg: &RunConfig, problem: &dyn Problem) -> Result<Vec<Vec<f64>>, CliError> {
    let mut starts = cfg.x0.clone();
    if let Some(p) = &cfg.protocol {
        starts.extend(Protocol::parse(p)?.points(problem.dim())?);
    }
    if starts.is_empty() {
        starts.push(problem.default_start().ok_or_else(|| {
            CliError::Config("problem has no default starting point; pass --x0 or --protocol".into())
        })?);
    }
    for x0 in &starts {
        if x0.len() != problem.dim() {
            return Err(CliError::Config(format!(
                "starting point has {} coordinates, problem has {}",
                x0.len(),
                problem.dim()
            )));
        }
    }
    Ok(starts)
}

pub fn solve(cfg: &RunConfig, threads: usize) -> Result<SolveOutcome, CliError> {
    let name = cfg.problem_name()?;
    let problem = resolve_problem(name)?;
    let barrier = resolve_barrier(&cfg.barrier)?;
    cfg.outer.validate().map_err(CliError::Solver)?;
    cfg.inner.validate(problem.prox_bound_threshold()).map_err(CliError::Solver)?;
    let starts = starting_points(cfg, &*problem)?;

    let out_dir = cfg.resolved_out_dir();
    create_dir(&out_dir)?;

    let batch = Batch { problem: &*problem, barrier: &*barrier, outer: &cfg.outer, inner: &cfg.inner };
    let runs = batch.run_all(&starts, threads)?;

    let mut summaries = Vec::with_capacity(runs.len());
    for run in &runs {
        let trace_file = match cfg.trace_format {
            TraceFormat::Csv => {
                let path = out_dir.join(format!("trace-{:03}.csv", run.index));
                write_csv(&path, &TRACE_HEADER, trace_rows(&run.trace))?;
                Some(path)
            }
            TraceFormat::None => None,
        };
        summaries.push(RunSummary::new(run, trace_file));
    }
    let summary = Summary {
        problem: name,
        barrier: barrier.name(),
        outer: &cfg.outer,
        inner: &cfg.inner,
        converged: runs.iter().filter(|r| r.converged()).count(),
        runs: summaries,
    };
    write_json(&out_dir.join("summary.json"), &summary)?;
    let exit_code = exit_code(&runs);
    Ok(SolveOutcome { out_dir, runs, exit_code })
}

/// One-line-per-run table for the terminal.
pub fn solve_table(runs: &[Run]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>5}  {:<22} {:>9} {:>9} {:>6} {:>7}  x",
        "start", "status", "primal", "dual", "outer", "grads"
    );
    for run in runs {
        let r = &run.result;
        let x: Vec<String> = r.pair.x.iter().map(|v| format!("{v:.6}")).collect();
        let _ = writeln!(
            out,
            "{:>5}  {:<22} {:>9.2e} {:>9.2e} {:>6} {:>7}  ({})",
            run.index,
            status_label(r.status),
            r.pair.primal_residual,
            r.pair.dual_bound,
            r.outer_iterations,
            r.grad_evals,
            x.join(", ")
        );
    }
    out
}

pub struct ReproduceOutcome {
    pub out_dir: PathBuf,
    /// The circle-protocol runs, by start index.
    pub circle: Vec<Run>,
    /// Runs from [`RESIDUAL_STARTS`].
    pub residual_runs: Vec<Run>,
    pub basins: Vec<Option<(usize, f64)>>,
    pub exit_code: i32,
}

impl ReproduceOutcome {
    /// How many circle runs landed near each known minimizer.
    pub fn basin_counts(&self) -> [usize; 3] {
        let mut counts = [0; 3];
        for (basin, _) in self.basins.iter().flatten() {
            counts[basin - 1] += 1;
        }
        counts
    }
}

pub fn residual_file_name(x0: &[f64; 2]) -> String {
    format!("residuals_{}_{}.csv", x0[0], x0[1])
}

/// Runs the 20-start circle protocol and the two residual-history starts on
/// the Rosenbrock instance with default parameters, and writes
/// `trajectories/run-XX.csv`, `residuals_<x0>.csv`, `basins.csv` and
/// `summary.json` under `out_dir`.
pub fn reproduce_rosenbrock(out_dir: &Path, threads: usize) -> Result<ReproduceOutcome, CliError> {
    let problem = rosenbrock_instance();
    let outer = OuterParams::default();
    let inner = InnerParams::default();
    let batch = Batch { problem: &problem, barrier: &Reciprocal, outer: &outer, inner: &inner };

    let circle_points = circle_starting_points(CIRCLE_STARTS);
    let mut starts: Vec<Vec<f64>> = circle_points.iter().map(|p| p.to_vec()).collect();
    starts.extend(RESIDUAL_STARTS.iter().map(|p| p.to_vec()));

    let traj_dir = out_dir.join("trajectories");
    create_dir(&traj_dir)?;
    let mut runs = batch.run_all(&starts, threads)?;
    let residual_runs = runs.split_off(CIRCLE_STARTS);
    let circle = runs;

    for run in &circle {
        let path = traj_dir.join(format!("run-{:02}.csv", run.index));
        write_csv(&path, &TRAJECTORY_HEADER, trajectory_rows(&run.x0, &run.trace))?;
    }
    for (run, x0) in residual_runs.iter().zip(&RESIDUAL_STARTS) {
        write_csv(&out_dir.join(residual_file_name(x0)), &RESIDUAL_HEADER, residual_rows(&run.trace))?;
    }

    let basins: Vec<Option<(usize, f64)>> = circle.iter().map(|r| classify_basin(&r.result.pair.x)).collect();
    let rows = circle.iter().zip(&basins).map(|(run, basin)| {
        let r = &run.result;
        let theta = 2.0 * std::f64::consts::PI * run.index as f64 / CIRCLE_STARTS as f64;
        let (label, distance) = match basin {
            Some((b, d)) => (b.to_string(), fmt_f64(*d)),
            None => ("none".to_string(), String::new()),
        };
        vec![
            run.index.to_string(),
            fmt_f64(theta),
            fmt_f64(run.x0[0]),
            fmt_f64(run.x0[1]),
            fmt_f64(r.pair.x[0]),
            fmt_f64(r.pair.x[1]),
            label,
            distance,
            status_label(r.status),
            r.outer_iterations.to_string(),
            r.grad_evals.to_string(),
            r.prox_evals.to_string(),
        ]
    });
    write_csv(&out_dir.join("basins.csv"), &BASIN_HEADER, rows)?;

    let all: Vec<RunSummary> = circle.iter().chain(&residual_runs).map(|r| RunSummary::new(r, None)).collect();
    let summary = Summary {
        problem: "rosenbrock",
        barrier: Reciprocal.name(),
        outer: &outer,
        inner: &inner,
        converged: all.iter().filter(|s| s.converged).count(),
        runs: all,
    };
    write_json(&out_dir.join("summary.json"), &summary)?;

    let exit_code = exit_code(&circle).max(exit_code(&residual_runs));
    Ok(ReproduceOutcome { out_dir: out_dir.to_path_buf(), circle, residual_runs, basins, exit_code })
}

pub fn reproduce_table(outcome: &ReproduceOutcome) -> String {
    let mut out = String::new();
    for (run, basin) in outcome.circle.iter().zip(&outcome.basins) {
        let x = &run.result.pair.x;
        let label = basin.map_or("none".to_string(), |(b, _)| format!("x[{b}]"));
        let _ = writeln!(out, "start {:>2}  -> ({:+.5}, {:+.5})  {label}", run.index, x[0], x[1]);
    }
    let [a, b, c] = outcome.basin_counts();
    let _ = writeln!(out, "basin counts: x[1]={a} x[2]={b} x[3]={c}");
    for run in &outcome.residual_runs {
        let x = &run.result.pair.x;
        let label = classify_basin(x).map_or("none".to_string(), |(b, _)| format!("x[{b}]"));
        let _ = writeln!(
            out,
            "residual run from ({}, {}) -> ({:+.5}, {:+.5}) {label}, {} gradient evaluations",
            run.x0[0], run.x0[1], x[0], x[1], run.result.grad_evals
        );
    }
    out
}

pub fn validate(name: &str, barrier: &str, opts: &ValidationOptions) -> Result<ValidationReport, CliError> {
    let problem = resolve_problem(name)?;
    let barrier = resolve_barrier(barrier)?;
    Ok(validate_problem(&*problem, &*barrier, opts)?)
}

/// Turns a failed report into the fault error, after it has been printed.
pub fn require_passed(name: &str, report: &ValidationReport) -> Result<(), CliError> {
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ValidationFailed { problem: name.to_string(), failed: failed.join(", ") })
    }
}

pub fn validation_table(report: &ValidationReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        let _ =
            writeln!(out, "{mark} {:<28} worst {:>10.3e}  tol {:>8.1e}  n={}", c.name, c.worst, c.tolerance, c.samples);
        if !c.passed && !c.detail.is_empty() {
            let _ = writeln!(out, "     {}", c.detail);
        }
    }
    out
}

pub fn list_problems() -> String {
    let mut out = String::new();
    for info in REGISTRY {
        let _ = writeln!(out, "{:<18} {}", info.name, info.summary);
    }
    out
}
