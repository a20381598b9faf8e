use thiserror::Error;

/// Errors raised by evaluation and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A user-supplied evaluator returned NaN.
    #[error("evaluation fault: {what} returned NaN{}", index_suffix(*.index))]
    EvalFault { what: &'static str, index: Option<usize> },
    /// A point handed to an operation requiring `c(z) < 0` violates it.
    #[error("point is not strictly feasible: c[{index}] = {value}")]
    NotStrictlyFeasible { index: usize, value: f64 },
    /// A point handed to a solver lies outside `dom g`.
    #[error("point is outside the domain of g")]
    OutsideDomain,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

fn index_suffix(index: Option<usize>) -> String {
    match index {
        Some(i) => format!(" at component {i}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
