//! `symfq`: command-line driver for the counting, census and value-set
//! pipelines.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "symfq",
    version,
    about = "Exact point counts and explicit estimates over finite fields"
)]
pub struct Cli {
    /// key=value file; explicit flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,

    /// Ceiling on elementary evaluations per enumeration.
    #[arg(long, global = true, env = "SYMFQ_WORK_CEILING")]
    pub work_ceiling: Option<u64>,

    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count F_q-points of a system in elementary symmetric polynomials.
    CountPoints(CountArgs),
    /// Tally factorization patterns over a linear family of monic polynomials.
    PatternCensus(CensusArgs),
    /// Average value set over polynomials with prescribed top coefficients.
    ValueSet(ValueSetArgs),
    /// Sample the full-rank Jacobian hypothesis over small extensions.
    HypothesisCheck(HypothesisArgs),
    /// Re-check a saved count-points or pattern-census report.
    VerifyBounds(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Field order, a prime power.
    #[arg(long)]
    pub q: Option<u64>,
    /// Characteristic (with --k).
    #[arg(long)]
    pub p: Option<u64>,
    /// Extension degree (with --p).
    #[arg(long)]
    pub k: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Number of elementary symmetric variables Y1..Ys.
    #[arg(long)]
    pub s: usize,
    /// Number of coordinates x_1..x_r.
    #[arg(long)]
    pub r: usize,
    /// File with one polynomial per line.
    #[arg(long, value_name = "FILE", conflicts_with = "poly")]
    pub system: Option<PathBuf>,
    /// A polynomial of the system; repeat for several.
    #[arg(long)]
    pub poly: Vec<String>,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub system: SystemArgs,
    /// Pairs that must differ: all, none, or a list like 1-2,3-4.
    #[arg(long, default_value = "all")]
    pub ineq: String,
    /// Also count points at infinity.
    #[arg(long)]
    pub infinity: bool,
    /// Compare counts with the explicit estimates.
    #[arg(long)]
    pub verify_bounds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Degree of the family.
    #[arg(long)]
    pub n: usize,
    /// Constraint file, one `c_1 ... c_s | alpha` row per constraint.
    #[arg(long, value_name = "FILE")]
    pub family: PathBuf,
    #[arg(long, value_enum, default_value = "json", alias = "format")]
    pub out: Format,
    /// Compare the census with the explicit pattern estimates.
    #[arg(long)]
    pub verify_bounds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Chi,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChiMethodArg {
    Subsets,
    Pointcount,
}

#[derive(Args, Debug)]
pub struct ValueSetArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub n: usize,
    /// Window length; must equal the number of entries in --a.
    #[arg(long)]
    pub s: Option<usize>,
    /// Prescribed coefficients a_{n-1},...,a_{n-s}.
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, value_enum, default_value = "both")]
    pub method: Method,
    /// How interpolating sets are counted on the chi path.
    #[arg(long, value_enum, default_value = "subsets")]
    pub chi_method: ChiMethodArg,
    #[arg(long)]
    pub verify_bounds: bool,
}

#[derive(Args, Debug)]
pub struct HypothesisArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[command(flatten)]
    pub system: SystemArgs,
    /// Largest extension degree scanned.
    #[arg(long, default_value_t = 2)]
    pub max_ext: u32,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// A JSON report written by count-points or pattern-census.
    #[arg(long, value_name = "FILE")]
    pub report: PathBuf,
    /// The system the count-points report was produced from.
    #[arg(long, value_name = "FILE")]
    pub system: Option<PathBuf>,
}

fn main() -> ExitCode {
    let argv = match config::merged_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
