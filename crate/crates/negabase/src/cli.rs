//! Command-line syntax.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "negabase", version, about = "Positional numeration in real bases |γ| > 1")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the first digits of an expansion and the orbit that produced them.
    Expand(ExpandArgs),
    /// Decide whether the optimal-map (or greedy) representation of x is optimal up to a depth.
    Certify(CertifyArgs),
    /// Describe a base: interval, regime, discontinuities, confluence, counterexample interval.
    Classify(CommonArgs),
    /// Sample the counterexample interval and verify every sample, or emit plot data with --grid.
    Scan(ScanArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Base expression; a leading minus gives a negative base, e.g. "-(1+sqrt(5))/2".
    #[arg(long, allow_hyphen_values = true)]
    pub base: String,
    /// Refinement cap for comparisons that have no exact path, in bits.
    #[arg(
        long,
        env = "NEGABASE_PRECISION_BITS",
        default_value_t = negabase_core::realnum::DEFAULT_PRECISION_BITS,
        value_parser = clap::value_parser!(u32).range(64..)
    )]
    pub precision_bits: u32,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the result here (atomically) instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: u64,
    /// Use the greedy map instead of the optimal map (positive bases, x in [0, 1)).
    #[arg(long)]
    pub greedy: bool,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Defaults to 20 for negative bases and 25 for positive ones.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: Option<u64>,
    /// Certify the greedy expansion instead of the optimal-map candidate.
    #[arg(long)]
    pub greedy: bool,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Digits computed per sample; never below the depth the construction needs.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub depth: u64,
    /// Instead of sampling, emit the graph of T_o on this many grid points as CSV.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub grid: Option<u64>,
}
