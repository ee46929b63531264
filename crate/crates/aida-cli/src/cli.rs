//! Command-line interface definition.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "aida",
    about = "Aida optimizer runner: single runs, stability analysis and benchmark sweeps",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EpsModeArg {
    /// Denominator (r + eps)^(q/p).
    Inside,
    /// Denominator r^(q/p) + eps.
    Outside,
}

impl From<EpsModeArg> for aida::EpsMode {
    fn from(m: EpsModeArg) -> Self {
        match m {
            EpsModeArg::Inside => aida::EpsMode::InsidePower,
            EpsModeArg::Outside => aida::EpsMode::OutsidePower,
        }
    }
}

/// Optimizer hyperparameters shared by several subcommands. Flag names
/// mirror the usual symbols (beta1, beta2, lr, eps, mu, p, q).
#[derive(Debug, Args)]
pub struct HyperArgs {
    /// First-moment averaging coefficient.
    #[arg(long, default_value_t = 0.9)]
    pub beta1: f64,
    /// Second-moment averaging coefficient.
    #[arg(long, default_value_t = 0.999)]
    pub beta2: f64,
    /// Common learning rate.
    #[arg(long, alias = "eta", default_value_t = 1e-3)]
    pub lr: f64,
    /// Numerical-stability offset.
    #[arg(long, default_value_t = 1e-8)]
    pub eps: f64,
    /// Decoupled weight decay.
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    /// Power of the gradient magnitude in the second moment.
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Magnitude exponent of the update.
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    /// Placement of eps in the denominator.
    #[arg(long, value_enum, default_value = "inside")]
    pub eps_mode: EpsModeArg,
}

impl HyperArgs {
    pub fn to_config(&self) -> aida::AidaConfig {
        aida::AidaConfig {
            beta1: self.beta1,
            beta2: self.beta2,
            eta: self.lr,
            epsilon: self.eps,
            mu: self.mu,
            p: self.p,
            q: self.q,
            eps_mode: self.eps_mode.into(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the optimizer on one problem and write the trajectory CSV.
    Optimize(OptimizeArgs),
    /// Analyze fixed-point stability for a configuration, or sweep the
    /// eigenvalue magnitudes over phi = eta * gamma / sqrt(eps).
    Stability(StabilityArgs),
    /// Run the ten benchmark problems over the configured (p, q) setups.
    Suite(SuiteArgs),
    /// Emit the quadratic-probe panel grids as CSV files.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Problem name: fun1..fun10 or quad.
    #[arg(long)]
    pub problem: String,
    /// Curvature of the quadratic probe (quad only).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Initial point override: a single value broadcasts over all
    /// coordinates, or a comma-separated list of length n.
    #[arg(long)]
    pub x0: Option<String>,
    /// Use the classical both-squared Himmelblau variant for fun1.
    #[arg(long)]
    pub himmelblau_classical: bool,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// Number of optimizer steps.
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    /// Logging cadence; defaults to 1 for quad and 100 otherwise.
    #[arg(long)]
    pub log_every: Option<usize>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    /// Hessian eigenvalues, comma separated.
    #[arg(long)]
    pub gamma: Option<String>,
    /// Derive the Hessian spectrum from a problem at its known optimum.
    #[arg(long)]
    pub problem: Option<String>,
    /// Required with --problem: analyze at the registered optimum.
    #[arg(long)]
    pub at_opt: bool,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// Sweep phi over LO:HI:STEP and write phi,abs_lambda2,abs_lambda3.
    #[arg(long)]
    pub sweep_phi: Option<String>,
    /// Output CSV path for the sweep (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Output directory for trajectory and summary CSVs.
    #[arg(long, default_value = "aida_suite")]
    pub out_dir: PathBuf,
    /// Steps per run.
    #[arg(long, default_value_t = 100_000)]
    pub steps: usize,
    /// Logging cadence.
    #[arg(long, default_value_t = 100)]
    pub log_every: usize,
    /// (p, q) setups to run, each as "P,Q"; defaults to 2,1 2,2 1,2.
    #[arg(long)]
    pub setups: Vec<String>,
    /// Gradient-norm threshold ratio for steps_to_threshold.
    #[arg(long, default_value_t = 1e-3)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Which quadratic-probe panel grid to emit: 2 compares (2,1) against
    /// (2,2) over a learning-rate and eps grid; 3 compares (2,2) against
    /// (1,2) over beta2, eps and mu.
    #[arg(long)]
    pub figure: u8,
    /// Output directory.
    #[arg(long, default_value = "aida_sweep")]
    pub out_dir: PathBuf,
    /// Learning rates for the grid-2 panels; the default derives 0.25x
    /// and 10x of the stability boundary per eps.
    #[arg(long)]
    pub eta_list: Option<String>,
    /// Epsilon values (both figures).
    #[arg(long, default_value = "1e-10,1e-20,1e-30")]
    pub eps_list: String,
    /// beta2 values for the grid-3 panels.
    #[arg(long, default_value = "0.99,0.999")]
    pub beta2_list: String,
    /// mu values for the grid-3 panels.
    #[arg(long, default_value = "0,1e-5")]
    pub mu_list: String,
    /// Steps per run.
    #[arg(long, default_value_t = 200_000)]
    pub steps: usize,
    /// Logging cadence.
    #[arg(long, default_value_t = 10)]
    pub log_every: usize,
}
