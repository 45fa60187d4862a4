//! Command-line front end for the interaction-effect toolkit: tabulate
//! games, decompose them into per-coalition effects, run sparsity and
//! attribution analyses, exercise the self-check suites, and generate
//! synthetic game files.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 oracle
//! process/protocol error, 4 degenerate game.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use harsanyi_core::Error;

pub mod caps;
pub mod commands;

#[derive(Parser)]
#[command(
    name = "harsanyi",
    version,
    about = "Exact interaction-effect decomposition for black-box functions of maskable inputs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Decompose a game into per-coalition interaction effects.
    Compute(ComputeArgs),
    /// Report how effect mass concentrates across interaction orders.
    Sparsity(SparsityArgs),
    /// Shapley-style attributions computed along two independent routes.
    Attribution(AttributionArgs),
    /// Run the randomized self-check suites.
    Verify(VerifyArgs),
    /// Generate synthetic game files.
    Synth(SynthArgs),
}

#[derive(Args)]
pub struct ComputeArgs {
    /// Input file: value table or game spec JSON.
    #[arg(
        long,
        value_name = "PATH",
        required_unless_present = "oracle_cmd",
        conflicts_with = "oracle_cmd"
    )]
    pub input: Option<PathBuf>,
    /// Child-process oracle command line (split on whitespace).
    #[arg(long, value_name = "CMD", requires = "n")]
    pub oracle_cmd: Option<String>,
    /// Player count for --oracle-cmd.
    #[arg(long, value_name = "N", requires = "oracle_cmd")]
    pub n: Option<u32>,
    /// Where to write the effects file.
    #[arg(long, value_name = "PATH")]
    pub output: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args)]
pub struct SparsityArgs {
    /// Input file: value table or game spec JSON.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Write the primary document here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Salience threshold override (default: 5% of the mean |u|).
    #[arg(long, value_name = "FLOAT")]
    pub tau: Option<f64>,
    /// Growth exponent override (default: smallest feasible).
    #[arg(long, value_name = "FLOAT")]
    pub p: Option<f64>,
    /// Top interaction order override (default: highest order with mass).
    #[arg(long, value_name = "K")]
    pub order_cap: Option<u32>,
    /// Also write the strength curve as CSV to this path.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Primary document: the full report (json) or the curve (csv).
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
}

#[derive(Args)]
pub struct AttributionArgs {
    /// Input file: value table or game spec JSON.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Coalition mask to analyse in depth.
    #[arg(long, value_name = "MASK")]
    pub target: Option<u32>,
    /// Order cutoff for the capped index (default: the target's size).
    #[arg(long, value_name = "K", requires = "target")]
    pub order: Option<u32>,
    /// Write the report JSON here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// One of: axioms, matching, theorems, lemmas, all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Player-count override for the randomized checks (2..=12).
    #[arg(long, value_name = "N")]
    pub n: Option<u32>,
    /// Repetition override per randomized check.
    #[arg(long, value_name = "COUNT")]
    pub trials: Option<usize>,
    /// Value-table file to audit against --interactions.
    #[arg(long, value_name = "PATH", requires = "interactions")]
    pub values: Option<PathBuf>,
    /// Effects file claimed to decompose --values.
    #[arg(long, value_name = "PATH", requires = "values")]
    pub interactions: Option<PathBuf>,
    /// Relative tolerance for the file audit.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the check results as JSON.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum SynthKind {
    Planted,
    Polynomial,
    Noisy,
    Parity,
    #[value(name = "or_game")]
    OrGame,
}

#[derive(Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: SynthKind,
    /// Player count.
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the game spec here.
    #[arg(long, value_name = "PATH")]
    pub spec_out: Option<PathBuf>,
    /// Write the tabulated value table here.
    #[arg(long, value_name = "PATH")]
    pub table_out: Option<PathBuf>,
    /// planted: number of concepts.
    #[arg(long, default_value_t = 3)]
    pub concepts: usize,
    /// planted: smallest concept order.
    #[arg(long, default_value_t = 1)]
    pub min_order: u32,
    /// planted: largest concept order (default: min(n, 4)).
    #[arg(long, value_name = "K")]
    pub max_order: Option<u32>,
    /// planted: smallest coefficient magnitude.
    #[arg(long, default_value_t = 0.5)]
    pub coeff_lo: f64,
    /// planted: largest coefficient magnitude.
    #[arg(long, default_value_t = 2.0)]
    pub coeff_hi: f64,
    /// planted: allow negative coefficients.
    #[arg(long)]
    pub signed: bool,
    /// planted: positive coefficients with a guaranteed singleton concept.
    #[arg(long, conflicts_with_all = ["signed", "min_order"])]
    pub monotone: bool,
    /// polynomial: number of product terms.
    #[arg(long, default_value_t = 4)]
    pub terms: usize,
    /// polynomial: largest total degree.
    #[arg(long, default_value_t = 3)]
    pub max_degree: u32,
    /// noisy: independent noise scale per coalition.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// noisy: the kind of game the noise is added to (default: planted).
    #[arg(long, value_enum)]
    pub base: Option<SynthKind>,
    /// or_game: mask of participating players.
    #[arg(long, value_name = "MASK")]
    pub members: Option<u32>,
    /// or_game: payoff when any member is present.
    #[arg(long, default_value_t = 1.0)]
    pub payoff: f64,
}

/// Map an error onto the documented exit codes.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::DegenerateGame(_) => 4,
        Error::AssumptionViolated(_) => 1,
        e if e.is_oracle_error() => 3,
        _ => 2,
    }
}

/// Parse arguments and dispatch. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too; those exit 0.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let cap = caps::max_n_from_env();
    let outcome = match &cli.command {
        Command::Compute(args) => commands::cmd_compute(args, cap),
        Command::Sparsity(args) => commands::cmd_sparsity(args, cap),
        Command::Attribution(args) => commands::cmd_attribution(args, cap),
        Command::Verify(args) => commands::cmd_verify(args, cap),
        Command::Synth(args) => commands::cmd_synth(args, cap),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}
