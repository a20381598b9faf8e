use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_point, RunConfig, TraceFormat};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "iprox", version, about = "Interior-point proximal gradient solver harness")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a registered problem from one or more starting points
    Solve(Box<SolveArgs>),
    /// Run the 20-start Rosenbrock experiment and write plot-ready CSV files
    ReproduceRosenbrock(ReproduceArgs),
    /// Check derivatives, prox selections and barrier axioms of a problem
    Validate(ValidateArgs),
    /// Print the problem registry
    ListProblems,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// JSON config file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Registered problem name, e.g. rosenbrock or qbox-3-7
    #[arg(long)]
    pub problem: Option<String>,
    /// Starting point as comma-separated reals; repeat for several starts
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Vec<String>,
    /// Multistart protocol, e.g. circle:20
    #[arg(long)]
    pub protocol: Option<String>,
    #[arg(long)]
    pub barrier: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps_p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps_d: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta_mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta_eps: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub max_outer_iters: Option<usize>,
    #[arg(long)]
    pub max_inner_iters: Option<usize>,
    /// Output directory [default: $IPROX_OUT_DIR, else ./iprox-out]
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub trace_format: Option<TraceFormat>,
    /// Worker threads for multistart runs [default: available cores]
    #[arg(long)]
    pub threads: Option<usize>,
}

impl SolveArgs {
    /// Loads the config file, if any, and lays the flags over it.
    pub fn to_config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(p) = &self.problem {
            cfg.problem = Some(p.clone());
        }
        if !self.x0.is_empty() {
            cfg.x0 = self.x0.iter().map(|s| parse_point(s)).collect::<Result<_, _>>()?;
        }
        if let Some(p) = &self.protocol {
            cfg.protocol = Some(p.clone());
        }
        if let Some(b) = &self.barrier {
            cfg.barrier = b.clone();
        }
        let outer = &mut cfg.outer;
        let inner = &mut cfg.inner;
        for (flag, slot) in [
            (self.eps_p, &mut outer.eps_p),
            (self.eps_d, &mut outer.eps_d),
            (self.mu0, &mut outer.mu0),
            (self.eps0, &mut outer.eps0),
            (self.theta_mu, &mut outer.theta_mu),
            (self.theta_eps, &mut outer.theta_eps),
            (self.gamma0, &mut inner.gamma0),
            (self.alpha, &mut inner.alpha),
            (self.beta, &mut inner.beta),
        ] {
            if let Some(v) = flag {
                *slot = v;
            }
        }
        if let Some(v) = self.max_outer_iters {
            outer.max_outer_iters = v;
        }
        if let Some(v) = self.max_inner_iters {
            inner.max_inner_iters = v;
        }
        if let Some(dir) = &self.out_dir {
            cfg.out_dir = Some(dir.clone());
        }
        if let Some(t) = self.trace_format {
            cfg.trace_format = t;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Output directory [default: $IPROX_OUT_DIR, else ./iprox-out]
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Registered problem name
    pub problem: String,
    #[arg(long, default_value = "reciprocal")]
    pub barrier: String,
    /// Random strictly feasible sample points for derivative checks
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print the report as JSON instead of a table
    #[arg(long)]
    pub json: bool,
}
