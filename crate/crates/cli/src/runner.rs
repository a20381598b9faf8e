//! Runs one solve per starting point, possibly on several threads.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use iprox::barrier::Barrier;
use iprox::{build_kkt_report, ip_solve, InnerParams, IpResult, KktReport, OuterParams, Problem, SolveTrace};

use crate::error::CliError;

/// The result of one start.
#[derive(Debug, Clone)]
pub struct Run {
    pub index: usize,
    pub x0: Vec<f64>,
    pub result: IpResult,
    pub trace: SolveTrace,
    pub kkt: KktReport,
}

impl Run {
    pub fn converged(&self) -> bool {
        self.result.status.converged()
    }
}

/// Shared, read-only inputs for a batch of runs.
pub struct Batch<'a> {
    pub problem: &'a dyn Problem,
    pub barrier: &'a dyn Barrier,
    pub outer: &'a OuterParams,
    pub inner: &'a InnerParams,
}

impl Batch<'_> {
    pub fn run_one(&self, index: usize, x0: &[f64]) -> Result<Run, CliError> {
        let mut trace = SolveTrace::default();
        let result = ip_solve(self.problem, self.barrier, x0, self.outer, self.inner, &mut trace)?;
        let kkt = build_kkt_report(&result.pair, self.problem, self.outer)?;
        Ok(Run { index, x0: x0.to_vec(), result, trace, kkt })
    }

    /// Solves from every start and returns the runs ordered by start index.
    /// The first error (by start index) wins, so failures are reported the
    /// same way regardless of scheduling.
    pub fn run_all(&self, starts: &[Vec<f64>], threads: usize) -> Result<Vec<Run>, CliError> {
        let workers = threads.clamp(1, starts.len().max(1));
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<Result<Run, CliError>>>> = Mutex::new((0..starts.len()).map(|_| None).collect());
        thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(x0) = starts.get(i) else { break };
                    let outcome = self.run_one(i, x0);
                    slots.lock().expect("worker panicked")[i] = Some(outcome);
                });
            }
        });
        slots
            .into_inner()
            .expect("worker panicked")
            .into_iter()
            .map(|slot| slot.expect("every start is visited"))
            .collect()
    }
}

/// Worker count for multistart batches.
pub fn default_threads() -> usize {
    thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}
