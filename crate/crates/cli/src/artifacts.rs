//! CSV and JSON artifacts. Column sets are part of the interface; see the
//! README before changing them.

use std::fs;
use std::path::{Path, PathBuf};

use iprox::{InnerParams, KktReport, OuterParams, OuterStatus, SolveTrace};
use serde::Serialize;

use crate::error::CliError;
use crate::runner::Run;

pub const TRACE_HEADER: [&str; 10] =
    ["k", "j", "gamma", "q_mu", "inner_residual", "primal_residual", "eps_k", "mu_k", "grad_evals", "prox_evals"];
pub const TRAJECTORY_HEADER: [&str; 4] = ["k", "j", "x1", "x2"];
pub const RESIDUAL_HEADER: [&str; 7] =
    ["grad_evals", "k", "j", "dual_residual", "inner_residual", "primal_residual", "mu_k"];
pub const BASIN_HEADER: [&str; 12] = [
    "start",
    "theta",
    "x0_1",
    "x0_2",
    "x1",
    "x2",
    "basin",
    "distance",
    "status",
    "outer_iterations",
    "grad_evals",
    "prox_evals",
];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|e| CliError::output(path, e))
}

/// Writes a CSV file in one go so a failed write leaves no partial artifact
/// behind a success exit code.
pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut writer = csv::Writer::from_writer(Vec::new());
    let to_io = |e: csv::Error| CliError::output(path, std::io::Error::other(e));
    writer.write_record(header).map_err(to_io)?;
    for row in rows {
        writer.write_record(&row).map_err(to_io)?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::output(path, e.into_error()))?;
    fs::write(path, bytes).map_err(|e| CliError::output(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("summary types serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::output(path, e))
}

pub fn trace_rows(trace: &SolveTrace) -> impl Iterator<Item = Vec<String>> + '_ {
    trace.inner.iter().map(|r| {
        vec![
            r.outer_iter.to_string(),
            r.inner_iter.to_string(),
            fmt_f64(r.gamma),
            fmt_f64(r.q_mu),
            fmt_f64(r.inner_residual),
            fmt_f64(r.primal_residual),
            fmt_f64(r.eps_k),
            fmt_f64(r.mu_k),
            r.grad_evals.to_string(),
            r.prox_evals.to_string(),
        ]
    })
}

/// The dual residual column is the certified bound `ε_k`, which is what the
/// staircase plots show; the raw residual norm sits next to it.
pub fn residual_rows(trace: &SolveTrace) -> impl Iterator<Item = Vec<String>> + '_ {
    trace.inner.iter().map(|r| {
        vec![
            r.grad_evals.to_string(),
            r.outer_iter.to_string(),
            r.inner_iter.to_string(),
            fmt_f64(r.eps_k),
            fmt_f64(r.inner_residual),
            fmt_f64(r.primal_residual),
            fmt_f64(r.mu_k),
        ]
    })
}

/// Iterate path of a 2-d run, starting with `x0` as row `k = 0, j = -1`.
pub fn trajectory_rows<'a>(x0: &'a [f64], trace: &'a SolveTrace) -> impl Iterator<Item = Vec<String>> + 'a {
    let start = std::iter::once(vec!["0".into(), "-1".into(), fmt_f64(x0[0]), fmt_f64(x0[1])]);
    start.chain(
        trace
            .inner
            .iter()
            .map(|r| vec![r.outer_iter.to_string(), r.inner_iter.to_string(), fmt_f64(r.x[0]), fmt_f64(r.x[1])]),
    )
}

pub fn status_label(status: OuterStatus) -> String {
    match status {
        OuterStatus::Converged => "converged".into(),
        OuterStatus::OuterIterationCap => "outer_iteration_cap".into(),
        OuterStatus::InnerFailed(s) => format!("inner_failed:{s:?}"),
    }
}

#[derive(Debug, Serialize)]
pub struct RunSummary<'a> {
    pub index: usize,
    pub x0: &'a [f64],
    pub x: &'a [f64],
    pub y: &'a [f64],
    pub status: OuterStatus,
    pub converged: bool,
    pub dual_bound: f64,
    pub dual_residual: f64,
    pub primal_residual: f64,
    pub cost_start: f64,
    pub cost: f64,
    pub final_mu: f64,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    pub grad_evals: usize,
    pub prox_evals: usize,
    pub trace_file: Option<PathBuf>,
    pub kkt: &'a KktReport,
}

impl<'a> RunSummary<'a> {
    pub fn new(run: &'a Run, trace_file: Option<PathBuf>) -> Self {
        let r = &run.result;
        RunSummary {
            index: run.index,
            x0: &run.x0,
            x: &r.pair.x,
            y: &r.pair.y,
            status: r.status,
            converged: run.converged(),
            dual_bound: r.pair.dual_bound,
            dual_residual: r.pair.dual_residual,
            primal_residual: r.pair.primal_residual,
            cost_start: r.cost_start,
            cost: r.cost,
            final_mu: r.final_mu,
            outer_iterations: r.outer_iterations,
            inner_iterations: r.inner_iterations,
            grad_evals: r.grad_evals,
            prox_evals: r.prox_evals,
            trace_file,
            kkt: &run.kkt,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Summary<'a> {
    pub problem: &'a str,
    pub barrier: &'a str,
    pub outer: &'a OuterParams,
    pub inner: &'a InnerParams,
    pub converged: usize,
    pub runs: Vec<RunSummary<'a>>,
}
