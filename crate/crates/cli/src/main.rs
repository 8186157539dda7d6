mod commands;
mod exit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ratiosim::ingest::ColumnRef;

#[derive(Debug, Parser)]
#[command(name = "ratiosim", version, about = "Averages of ratios vs ratios of averages for citation data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the AoR/RoA Monte Carlo sweep over (gamma, n) cells.
    Simulate(SimulateArgs),
    /// Rank countries by citations per document from a totals file.
    Rank(RankArgs),
    /// Fit a log-logistic law to one column of a CSV file.
    Fit(FitArgs),
    /// Two-sample Kolmogorov-Smirnov test between two value files.
    Ks(KsArgs),
    /// Compare truncated and untruncated zeta means.
    ZetaCheck(ZetaCheckArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Zeta exponent for publication counts (repeatable).
    #[arg(long = "gamma", required = true)]
    pub gammas: Vec<f64>,
    /// Researchers per cohort (repeatable).
    #[arg(long = "n", required = true)]
    pub ns: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = 500)]
    pub bootstrap: usize,
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,
    #[arg(long, default_value_t = ratiosim::distributions::DEFAULT_TRUNCATION)]
    pub truncation: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Citation frequency table (`citations,count`).
    #[arg(long)]
    pub citations_file: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub fit_loglogistic: bool,
    #[arg(long)]
    pub emit_figures: bool,
    #[arg(long)]
    pub correlation_table: bool,
    /// Histogram bins for figure data.
    #[arg(long, default_value_t = 30)]
    pub bins: usize,
    /// Worker threads (defaults to all cores). Output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Country totals file (`country,documents,citations`).
    #[arg(long)]
    pub file: PathBuf,
    /// Print only the first N countries.
    #[arg(long)]
    pub top: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub file: PathBuf,
    /// Column name or 0-based index.
    #[arg(long, default_value = "0")]
    pub column: ColumnRef,
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
}

#[derive(Debug, Args)]
pub struct KsArgs {
    /// First sample: one value per line, or a CSV column.
    pub first: PathBuf,
    pub second: PathBuf,
    /// Column name or 0-based index, used for both files.
    #[arg(long, default_value = "0")]
    pub column: ColumnRef,
}

#[derive(Debug, Args)]
pub struct ZetaCheckArgs {
    #[arg(long = "gamma", required = true)]
    pub gammas: Vec<f64>,
    #[arg(long, default_value_t = ratiosim::distributions::DEFAULT_TRUNCATION)]
    pub truncation: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(args),
        Command::Rank(args) => commands::rank(args),
        Command::Fit(args) => commands::fit(args),
        Command::Ks(args) => commands::ks(args),
        Command::ZetaCheck(args) => commands::zeta_check(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit::code_for(&err))
        }
    }
}
