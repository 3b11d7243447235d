//! `avwc`: structure tests, secrecy-capacity bounds and desk-scale code
//! constructions for arbitrarily varying wiretap channels described in TOML
//! spec files.

mod codefile;
mod commands;
mod report;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "avwc", version, about = "Arbitrarily varying wiretap channel toolkit")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Symmetrisability of the main family and the best eavesdropper channel.
    Structure {
        spec: PathBuf,
        /// Feasibility tolerance of the linear programs.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Lower and upper bounds on the secrecy capacity.
    Bounds(BoundsArgs),
    /// Print a channel spec file in canonical form.
    Fmt { spec: PathBuf },
    /// Build, evaluate and transform wiretap codes.
    Code {
        spec: PathBuf,
        #[arg(value_enum)]
        action: CodeAction,
        #[command(flatten)]
        args: CodeArgs,
    },
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    pub spec: PathBuf,
    /// Denominator of the input-distribution grid.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Ascent starts per optimisation.
    #[arg(long, default_value_t = 32)]
    pub starts: usize,
    /// Auxiliary alphabet size for the upper bound (default |A| + 1).
    #[arg(long)]
    pub u_size: Option<usize>,
    /// Also evaluate the multi-letter bound at this block length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Let the multi-letter state law vary per letter.
    #[arg(long)]
    pub per_letter: bool,
    /// Denominator of the state-law grid of the upper bounds.
    #[arg(long, default_value_t = 16)]
    pub q_grid: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CodeAction {
    Build,
    Evaluate,
    Robustify,
    Reduce,
    Eliminate,
    VerifyLemmas,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EvalModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchArg {
    Exhaustive,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KPresetArg {
    InProof,
    Display,
    NCubed,
    AllMembers,
}

#[derive(Args, Debug)]
pub struct CodeArgs {
    /// Block length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Rate backoff.
    #[arg(long, default_value_t = 0.1)]
    pub tau: f64,
    /// Typicality parameter.
    #[arg(long, default_value_t = 0.2)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Input distribution: a name from the spec, `uniform`, or `p0,p1,...`.
    #[arg(long)]
    pub input: Option<String>,
    /// Decoder mixtures: simplex grid with this denominator instead of the
    /// point masses plus the uniform mixture.
    #[arg(long)]
    pub decoder_grid: Option<usize>,
    /// Code file to operate on.
    #[arg(long)]
    pub code: Option<PathBuf>,
    /// Where to write the resulting code file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = EvalModeArg::Exhaustive)]
    pub mode: EvalModeArg,
    /// Transmissions per state sequence in sampled mode.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Worst-sequence search instead of a full table.
    #[arg(long, value_enum)]
    pub search: Option<SearchArg>,
    /// Include per-sequence rows in the report.
    #[arg(long)]
    pub table: bool,
    /// Number of members kept by the reduction.
    #[arg(long, conflicts_with = "k_preset")]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub k_preset: Option<KPresetArg>,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 64)]
    pub max_attempts: usize,
    /// Length of the member-index prefix.
    #[arg(long, default_value_t = 3)]
    pub prefix_len: usize,
    /// Coefficient of the typicality slack functions.
    #[arg(long, default_value_t = 2.0)]
    pub slack_coef: f64,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure {t} threads: {e}");
            return ExitCode::from(1);
        }
    }
    let echo = argv.into_iter().skip(1).collect();
    let outcome = match &cli.command {
        Command::Structure { spec, tol } => commands::structure(spec, *tol, echo),
        Command::Bounds(args) => commands::bounds(args, echo),
        Command::Fmt { spec } => match commands::canonical(spec) {
            Ok(text) => {
                print!("{text}");
                return ExitCode::SUCCESS;
            }
            Err(e) => Err(e),
        },
        Command::Code { spec, action, args } => commands::code(spec, *action, args, echo),
    };
    match outcome {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
