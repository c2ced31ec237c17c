use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fracdom", version, about = "Fractional stochastic dominance and Meyer risk measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Recorded in the output header; every search is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expected Shortfall curve of the log returns of a price series.
    EsCurve {
        #[command(flatten)]
        data: DataArgs,
    },
    /// CARA-Meyer risk measure over a grid of c, for the benchmark set and each benchmark.
    RhoCurve {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Zero crossing of c -> rho_c for a single benchmark.
    Cmax {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
        c_min: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        c_max: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Return-risk minimisation under a budget constraint, from a JSON config.
    Riskmin {
        #[arg(long)]
        config: PathBuf,
    },
    /// Searches for a violation of v-SD consistency.
    Falsify {
        /// Threshold utility, e.g. `cara:-1`, `logistic:1`, `sahara:1,1,0`, `kt:0.5,0.5,0.05`, `log`.
        #[arg(long, allow_hyphen_values = true)]
        utility: String,
        #[arg(long, value_enum, default_value_t = Mode::Pratt)]
        mode: Mode,
        /// Risk measure for `mps` mode: `worst`, `best`, `mean`, `es:<p>` or `cara-ce:<c>`.
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<String>,
    },
    /// Grid search for comonotone improvements of a two-state allocation.
    Counterexample {
        #[arg(long, default_value_t = 2000)]
        resolution: usize,
        #[arg(long, value_enum, default_value_t = Instance::Negative)]
        instance: Instance,
    },
    /// Summary statistics of log returns or of return differences to benchmarks.
    Summary {
        #[command(flatten)]
        data: DataArgs,
    },
    /// Expected Shortfall curves of the two introductory lotteries.
    DemoIntro,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Pratt,
    Mps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Instance {
    /// Payoffs in (-inf, 0) with v = -log(-x).
    Negative,
    /// Sign-flipped payoffs in (0, inf) with v = log.
    Positive,
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// Price csv with columns `date,open`; `label=path` sets the label.
    #[arg(long)]
    pub input: Option<String>,
    /// Benchmark price csv, repeatable; `label=path` sets the label.
    #[arg(long)]
    pub benchmark: Vec<String>,
    #[arg(long)]
    pub from: Option<NaiveDate>,
    #[arg(long)]
    pub to: Option<NaiveDate>,
    /// Named window: crisis, stable or recovery.
    #[arg(long, conflicts_with_all = ["from", "to"])]
    pub window: Option<String>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub c_min: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub c_max: f64,
    #[arg(long, default_value_t = 201)]
    pub c_steps: usize,
}
