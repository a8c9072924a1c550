//! `lntopo`: topology experiments on payment-channel network snapshots.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Default seed, so repeated runs without `--seed` agree.
pub const DEFAULT_SEED: u64 = 20190103;

#[derive(Parser, Debug)]
#[command(name = "lntopo", version, about = "Topology and robustness analysis of payment-channel networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Overview statistics (size, density, distances, clustering, ...).
    Summarize(SummarizeArgs),
    /// Power-law fit of the degree distribution with a bootstrap p-value.
    Fit(FitArgs),
    /// Giant-component curves under random and targeted node removal.
    Percolate(PercolateArgs),
    /// Hub removal: cumulative one-by-one or one hub at a time.
    Attack(AttackArgs),
    /// Connect peripheral nodes and compare percolation thresholds.
    Reinforce(ReinforceArgs),
    /// Write a synthetic graph as a snapshot and an edge list.
    Generate(GenerateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Snapshot JSON or edge-list file.
    #[arg(long, value_name = "PATH", conflicts_with = "generate", required_unless_present = "generate")]
    pub input: Option<PathBuf>,
    /// Synthetic input, e.g. `ba:n=2000,m=2` or `config:n=10000,gamma=2.5,k_min=1,k_max=100`.
    #[arg(long, value_name = "SPEC")]
    pub generate: Option<String>,
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub input_format: InputFormat,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Rendering of the report on stdout (and of the summary file).
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Auto,
    Snapshot,
    Edgelist,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args, Debug)]
pub struct SummarizeArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: Common,
    /// Bootstrap replicates for the p-value; 0 skips the test.
    #[arg(long, default_value_t = 2500)]
    pub bootstraps: usize,
}

#[derive(Args, Debug, Clone)]
pub struct PercolationArgs {
    /// Comma-separated subset of rnd, hdr, hbr.
    #[arg(long, value_delimiter = ',', default_value = "rnd,hdr,hbr")]
    pub strategies: Vec<String>,
    /// Random-removal trials averaged per curve.
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Spacing of the removed-fraction grid.
    #[arg(long, default_value_t = 0.005)]
    pub step: f64,
}

#[derive(Args, Debug)]
pub struct PercolateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub percolation: PercolationArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttackMode {
    Cumulative,
    Single,
}

#[derive(Args, Debug)]
pub struct AttackArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = AttackMode::Cumulative)]
    pub mode: AttackMode,
    /// Number of hubs to remove (cumulative) or to test one at a time (single).
    #[arg(long, default_value_t = 30)]
    pub top_k: usize,
}

#[derive(Args, Debug)]
pub struct ReinforceArgs {
    #[command(flatten)]
    pub common: Common,
    /// Nodes with at most this degree count as peripheral.
    #[arg(long, default_value_t = 2)]
    pub degree_threshold: usize,
    /// Edges to add; defaults to 5% of the existing edges.
    #[arg(long)]
    pub new_edges: Option<usize>,
    #[command(flatten)]
    pub percolation: PercolationArgs,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub common: Common,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub const PARSE: u8 = 1;
    pub const CONFIG: u8 = 2;
    pub const DEGENERATE: u8 = 3;

    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Failure::new(Self::CONFIG, message)
    }
}

impl From<lntopo_core::Error> for Failure {
    fn from(e: lntopo_core::Error) -> Self {
        use lntopo_core::Error as E;
        let code = match e {
            E::Parse { .. } | E::Field { .. } | E::Line { .. } | E::UnknownEndpoint { .. } | E::InvalidNodeId(_) => {
                Failure::PARSE
            }
            E::Undefined(_) => Failure::DEGENERATE,
            E::Domain(_) | E::InvalidSpec(_) | E::UnknownNode(_) => Failure::CONFIG,
        };
        Failure::new(code, e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let common = match &cli.command {
        Command::Summarize(a) => &a.common,
        Command::Fit(a) => &a.common,
        Command::Percolate(a) => &a.common,
        Command::Attack(a) => &a.common,
        Command::Reinforce(a) => &a.common,
        Command::Generate(a) => &a.common,
    };
    if let Some(threads) = common.threads {
        if threads == 0 {
            return Err(Failure::config("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::config(format!("cannot start thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Summarize(a) => commands::summarize(a),
        Command::Fit(a) => commands::fit(a),
        Command::Percolate(a) => commands::percolate(a),
        Command::Attack(a) => commands::attack(a),
        Command::Reinforce(a) => commands::reinforce(a),
        Command::Generate(a) => commands::generate(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("lntopo: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
