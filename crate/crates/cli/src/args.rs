use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctlab_core::kleinian::Monodromy;

fn parse_monodromy(s: &str) -> Result<Monodromy, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Parser)]
#[command(name = "ctlab", version, about = "Boundary maps of punctured-torus bundles and coarse audits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the boundary map and write the curve as CSV (and SVG).
    CtDraw(CtDrawArgs),
    /// Compare endpoint gaps of lamination leaves with transverse pairs.
    VerifyLeaves(VerifyLeavesArgs),
    /// Run a coarse-geometry operation on a graph file.
    Coarse(CoarseArgs),
    /// Build a split model from a spec file and run the audit suite.
    LadderAudit(LadderAuditArgs),
    /// Partition sampled leaves into classes and search for pole witnesses.
    LamPoles(LamPolesArgs),
}

#[derive(Debug, Args)]
pub struct CtDrawArgs {
    /// Monodromy matrix entries, row-major.
    #[arg(long, default_value = "2,1,1,1", value_parser = parse_monodromy, allow_hyphen_values = true)]
    pub monodromy: Monodromy,
    #[arg(long, default_value_t = 25)]
    pub depth: usize,
    /// Number of boundary samples.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long)]
    pub seed: u64,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the stereographic polyline as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyLeavesArgs {
    #[arg(long, default_value = "2,1,1,1", value_parser = parse_monodromy, allow_hyphen_values = true)]
    pub monodromy: Monodromy,
    /// Number of leaves, and of control pairs.
    #[arg(long, default_value_t = 50)]
    pub leaves: usize,
    #[arg(long, default_value_t = 30)]
    pub depth: usize,
    /// Depth of the comparison gaps used for the shrink factor.
    #[arg(long, default_value_t = 10)]
    pub baseline_depth: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long, default_value_t = 10.0)]
    pub ratio: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CoarseCommand {
    Delta,
    Electrocute,
    Track,
}

#[derive(Debug, Args)]
pub struct CoarseArgs {
    #[arg(value_enum)]
    pub operation: CoarseCommand,
    #[arg(long)]
    pub graph: PathBuf,
    /// Sample this many tuples or pairs instead of scanning all of them.
    #[arg(long, requires = "seed")]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LadderAuditArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Pairs per sampled audit.
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    /// Scan every pair instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 2.0)]
    pub lipschitz_bound: f64,
    #[arg(long, default_value_t = 2.0)]
    pub quasiconvexity_bound: f64,
    #[arg(long, default_value_t = 2.0)]
    pub c1_bound: f64,
    #[arg(long, default_value_t = 2.0)]
    pub k1_bound: f64,
    /// Defaults to the diameter of a tube cross-section.
    #[arg(long)]
    pub component_bound: Option<f64>,
    /// Directory for one JSON file per audit plus `summary.json`; a single
    /// bundle goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LamPolesArgs {
    #[arg(long, default_value = "2,1,1,1", value_parser = parse_monodromy, allow_hyphen_values = true)]
    pub monodromy: Monodromy,
    #[arg(long, default_value_t = 12)]
    pub leaves: usize,
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
