//! Command line arguments and the validated run configuration.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use spsym::contactflow::momentum::MomentumSpec;
use spsym::curvature::Budget;
use spsym::liecore::matrix_forms::AlgebraSpec;

use crate::CliError;

#[derive(Parser, Debug)]
#[command(name = "spsym", version, about = "Contact gradings, special symplectic data, curvature spaces and flows")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Grading, symplectic identities, round trip and weights.
    Report(Args),
    /// Dimensions of K, R, W, the prolongation and the Schur space.
    Curvature(Args),
    /// Numerical flow checks for a momentum `a`.
    Flow(Args),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Report(_) => "report",
            Command::Curvature(_) => "curvature",
            Command::Flow(_) => "flow",
        }
    }

    pub fn args(&self) -> &Args {
        match self {
            Command::Report(a) | Command::Curvature(a) | Command::Flow(a) => a,
        }
    }
}

#[derive(clap::Args, Debug, Clone, Default)]
pub struct Args {
    /// FAMILY:PARAMS, e.g. sp_real:2, su:2,2, g2_split.
    #[arg(long)]
    pub algebra: String,
    /// bochner:p,q | ricci:c | normal:c,rho0 | explicit:path
    #[arg(long = "a")]
    pub momentum: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma separated step sizes for the structure-equation stencil.
    #[arg(long, value_delimiter = ',')]
    pub eps_sweep: Option<Vec<f64>>,
    /// Largest dim V handed to the exact curvature solvers.
    #[arg(long)]
    pub budget_kernel: Option<usize>,
    /// Float tolerance for numerical assertions.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Transversality samples.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Retracted steps in the conservation walk.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub cache: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub algebra: String,
    #[serde(rename = "a")]
    pub momentum: Option<String>,
    pub seed: u64,
    pub eps_sweep: Vec<f64>,
    pub budget_kernel: usize,
    pub tolerance: f64,
    pub samples: usize,
    pub steps: usize,
    #[serde(skip)]
    pub spec: Option<AlgebraSpec>,
    #[serde(skip)]
    pub momentum_spec: Option<MomentumSpec>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub cache: Option<PathBuf>,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_EPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

impl RunConfig {
    pub fn new(command: &str, a: &Args) -> Result<Self, CliError> {
        let spec: AlgebraSpec = a.algebra.parse().map_err(|e| CliError::Config(format!("{e}")))?;
        let momentum_spec = match &a.momentum {
            Some(m) => Some(m.parse::<MomentumSpec>().map_err(|e| CliError::Config(format!("{e}")))?),
            None => None,
        };
        let cfg = RunConfig {
            command: command.to_string(),
            algebra: spec.to_string(),
            momentum: momentum_spec.as_ref().map(|m| m.to_string()),
            seed: a.seed,
            eps_sweep: a.eps_sweep.clone().unwrap_or_else(|| DEFAULT_EPS.to_vec()),
            budget_kernel: a.budget_kernel.unwrap_or(Budget::default().max_v),
            tolerance: a.tolerance.unwrap_or(DEFAULT_TOLERANCE),
            samples: a.samples.unwrap_or(10_000),
            steps: a.steps.unwrap_or(1000),
            spec: Some(spec),
            momentum_spec,
            out: a.out.clone(),
            cache: a.cache.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance > 0.0 && self.tolerance < 1e-3) {
            return Err(CliError::Config(format!("tolerance {} is outside (0, 1e-3)", self.tolerance)));
        }
        if self.budget_kernel == 0 || self.samples == 0 || self.steps == 0 {
            return Err(CliError::Config("budgets, samples and steps must be positive".into()));
        }
        if self.eps_sweep.len() < 2 || self.eps_sweep.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
            return Err(CliError::Config("eps sweep needs at least two values in (0, 1)".into()));
        }
        if self.command == "flow" && self.momentum_spec.is_none() {
            return Err(CliError::Config("flow needs --a".into()));
        }
        Ok(())
    }

    pub fn budget(&self) -> Budget {
        Budget { max_v: self.budget_kernel, ..Budget::default() }
    }

    pub fn spec(&self) -> &AlgebraSpec {
        self.spec.as_ref().expect("validated config")
    }
}
