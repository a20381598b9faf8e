//! Interior proximal gradient method for problems of the form
//!
//! ```text
//! minimize  f(x) + g(x)   subject to  c(x) ≤ 0
//! ```
//!
//! with `f`, `c` smooth and `g` nonsmooth, possibly nonconvex. Constraints
//! are handled by a barrier `b`; each barrier subproblem is solved by an
//! adaptive forward-backward method that keeps every iterate strictly
//! feasible, and an outer loop drives the barrier weight to zero while
//! recovering multipliers `y_i = μ b'(c_i(x))`.
//!
//! ```
//! use iprox::{ip_solve, problems::rosenbrock_instance, InnerParams, NoTrace, OuterParams, Reciprocal};
//!
//! let problem = rosenbrock_instance();
//! let out = ip_solve(&problem, &Reciprocal, &[0.0, 1.05], &OuterParams::default(), &InnerParams::default(), &mut NoTrace)?;
//! assert!(out.status.converged());
//! assert!((out.pair.x[0] - 0.21).abs() < 1e-2);
//! # Ok::<(), iprox::Error>(())
//! ```

pub mod barrier;
pub mod diagnostics;
pub mod error;
pub mod ext;
pub mod fixtures;
pub mod inner;
pub mod objective;
pub mod outer;
pub mod params;
pub mod problem;
pub mod problems;
pub mod prox;
pub mod rng;
pub mod trace;
pub mod validate;
pub mod vector;

pub use barrier::{Barrier, Reciprocal};
pub use diagnostics::{build_kkt_report, KktReport};
pub use error::{Error, Result};
pub use ext::ExtReal;
pub use inner::{forward_backward_step, ipfb_solve, linesearch_check, InnerResult, InnerStatus};
pub use objective::{eval_barrier_gradient, eval_barrier_objective};
pub use outer::{ip_solve, ip_solve_with, multiplier_estimate, primal_residual, IpResult, OuterStatus, PrimalDualPair};
pub use params::{InnerParams, OuterParams};
pub use problem::Problem;
pub use trace::{InnerRecord, NoTrace, OuterRecord, SolveTrace, TraceSink};
