//! `toric-hld`: generate training data, train and evaluate high-level
//! decoders, reproduce regression witnesses and time the hot paths.

mod commands;
mod error;
mod manifest;
mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use error::CliError;
use std::path::PathBuf;
use std::process::ExitCode;
use toric_hld::{SymmetryMode, Underlying};

#[derive(Debug, Parser)]
#[command(name = "toric-hld", version, about = "Toric code high-level decoder workbench")]
struct Cli {
    /// Worker threads for generation and evaluation (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample errors and write a canonicalized training set.
    GenData(GenDataArgs),
    /// Train a classifier on a dataset.
    Train(TrainArgs),
    /// Logical error rates relative to MWPM over a noise sweep.
    Eval(EvalArgs),
    /// Re-run a regression witness search or check.
    Repro(ReproArgs),
    /// Time canonicalization and the underlying decoders.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnderlyingArg {
    Mwpm,
    Trivial,
}

impl From<UnderlyingArg> for Underlying {
    fn from(u: UnderlyingArg) -> Self {
        match u {
            UnderlyingArg::Mwpm => Underlying::Mwpm,
            UnderlyingArg::Trivial => Underlying::Trivial,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymmetryArg {
    None,
    Center,
    Align,
}

impl From<SymmetryArg> for SymmetryMode {
    fn from(s: SymmetryArg) -> Self {
        match s {
            SymmetryArg::None => SymmetryMode::None,
            SymmetryArg::Center => SymmetryMode::Center,
            SymmetryArg::Align => SymmetryMode::Align,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReferenceArg {
    Mwpm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReproCase {
    Fig3,
    Fig4,
    GradCheck,
    MatchingOracle,
}

#[derive(Debug, Args)]
pub struct GenDataArgs {
    /// Lattice side length.
    #[arg(long = "L", alias = "l")]
    pub l: usize,
    /// Depolarizing noise parameter.
    #[arg(long)]
    pub p: f64,
    /// Number of samples.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "mwpm")]
    pub underlying: UnderlyingArg,
    #[arg(long, value_enum, default_value = "align")]
    pub symmetry: SymmetryArg,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Hidden layer sizes.
    #[arg(long, value_delimiter = ',', default_value = "500,250")]
    pub layers: Vec<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub iters: usize,
    #[arg(long, default_value_t = 0.001)]
    pub lr: f64,
    #[arg(long, default_value_t = 1000)]
    pub batch: usize,
    #[arg(long, default_value_t = 0.0)]
    pub weight_decay: f64,
    #[arg(long, default_value_t = 0.01)]
    pub init_width: f64,
    #[arg(long, default_value_t = 0.05)]
    pub val_fraction: f64,
    /// Iterations between curve points.
    #[arg(long, default_value_t = 1000)]
    pub val_interval: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out_model: PathBuf,
    #[arg(long)]
    pub out_curves: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Trained model; without it the underlying decoder itself is evaluated.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Lattice side length (taken from the model when omitted).
    #[arg(long = "L", alias = "l")]
    pub l: Option<usize>,
    /// Noise parameters; defaults to 0.01..0.18 in steps of 0.01.
    #[arg(long, value_delimiter = ',')]
    pub p_list: Option<Vec<f64>>,
    /// Trials per noise parameter.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub underlying: Option<UnderlyingArg>,
    #[arg(long, value_enum)]
    pub symmetry: Option<SymmetryArg>,
    #[arg(long, value_enum, default_value = "mwpm")]
    pub reference: ReferenceArg,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    #[arg(long, value_enum)]
    pub case: ReproCase,
    /// Required for the randomized cases (fig4, grad-check, matching-oracle).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write the report as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long = "L-list", alias = "l-list", value_delimiter = ',', default_value = "5,10,20,40")]
    pub l_list: Vec<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub p: f64,
    /// Samples per size for canonicalization and the trivial decoder.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Samples per size for MWPM.
    #[arg(long, default_value_t = 20)]
    pub n_mwpm: usize,
    #[arg(long)]
    pub seed: u64,
    /// CSV destination; printed to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", cli.jobs)))?;
    pool.install(|| match cli.command {
        Command::GenData(a) => commands::gen_data(a, cli.jobs),
        Command::Train(a) => commands::train(a),
        Command::Eval(a) => commands::eval(a, cli.jobs),
        Command::Repro(a) => commands::repro(a),
        Command::Bench(a) => commands::bench(a),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
