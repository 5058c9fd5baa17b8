use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

#[derive(Parser)]
#[command(name = "dtigra", version, about = "Dual TIGRA experiments on the autoconvolution problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write x†, f†, y, y^δ and metadata for an experiment configuration.
    Generate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "data")]
        out: PathBuf,
    },
    /// Run a solver on a generated data bundle.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Directory produced by `generate`.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "result")]
        out: PathBuf,
    },
    /// Evaluate the analysis constants for parameters given as JSON.
    Constants {
        #[arg(long)]
        config: PathBuf,
        /// Regularization parameter for the α-dependent constants (defaults to alpha0).
        #[arg(long)]
        alpha: Option<f64>,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the result-table grids for both solvers (or one, with --solver).
    ReproduceTables {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "tables")]
        out: PathBuf,
    },
}

#[derive(Args, Clone, Debug, Default)]
pub struct Common {
    /// Experiment configuration (JSON); omitted fields take their defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed_noise: Option<u64>,
    #[arg(long)]
    pub seed_start: Option<u64>,
    #[arg(long, value_enum)]
    pub solver: Option<SolverKind>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Relative noise level, e.g. 0.01 for 1%.
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long)]
    pub start_norm: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Dtigra,
    Landweber,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate { common, out } => commands::generate(&common, &out),
        Command::Solve { common, data, out } => commands::solve(&common, &data, &out),
        Command::Constants { config, alpha, out } => commands::constants(&config, alpha, out.as_deref()),
        Command::ReproduceTables { common, out } => commands::reproduce_tables(&common, &out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
