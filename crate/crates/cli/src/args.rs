use std::path::PathBuf;

use abp_core::pde::SolverConfig;
use abp_core::DEFAULT_SEED;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "abp-lab", version, about = "Discrete ABP proof traces for planar domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical isoperimetric quotient and ABP trace.
    Iso(Common),
    /// Anisotropic quotient for the domain's gauge and its trace.
    Wulff(Common),
    /// Weighted relative quotient in the domain's cone and its trace.
    Cone(Common),
    /// Principal eigenvalue, Faber–Krahn ratio and log-transform chain.
    Eigen(Common),
    /// Empirical ABP constant of the Dirichlet problem `Δu = f`.
    AbpEstimate(AbpArgs),
    /// Weighted Sobolev quotients of seeded test functions in the domain's cone.
    Sobolev(SobolevArgs),
    /// Batch reports and traces over a corpus file.
    Corpus(CorpusArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Domain JSON file.
    #[arg(long)]
    pub domain: Option<PathBuf>,
    /// Target mesh edge length.
    #[arg(long)]
    pub h: Option<f64>,
    /// Offset used to move a domain strictly inside its cone.
    #[arg(long)]
    pub shrink: Option<f64>,
    /// Relative tolerance of the linear solvers.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Random samples for coverage checks.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also write SVG figures.
    #[arg(long)]
    pub fig: bool,
}

impl Common {
    /// `base` with every solver flag given on the command line applied.
    pub fn solver(&self, base: SolverConfig) -> SolverConfig {
        SolverConfig {
            h: self.h.unwrap_or(base.h),
            shrink: self.shrink.unwrap_or(base.shrink),
            tol: self.tol.unwrap_or(base.tol),
            ..base
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AbpArgs {
    #[command(flatten)]
    pub common: Common,
    /// Constant source term `f`.
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub source: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SobolevArgs {
    #[command(flatten)]
    pub common: Common,
    /// Exponent `p` with `1 ≤ p < D`.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Number of seeded bumps.
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    /// Radius of the region the bumps are drawn from.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Mollification width of the ball indicator added to the family.
    #[arg(long, default_value_t = 0.02)]
    pub width: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    #[command(flatten)]
    pub common: Common,
    /// Corpus JSON file; the built-in corpus when absent.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Write the built-in corpus to this file and exit.
    #[arg(long)]
    pub write: Option<PathBuf>,
    /// Quotient reports only.
    #[arg(long)]
    pub no_trace: bool,
}
