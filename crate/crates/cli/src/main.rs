//! `mfseries` command-line front end.
//!
//! Exit codes: 0 success, 1 mathematical failure (a check did not pass or a
//! precondition such as invertibility of `E[x]` failed), 2 usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Environment variable holding the default tolerance.
pub const TOL_ENV: &str = "MFSERIES_TOL";

#[derive(Parser)]
#[command(name = "mfseries")]
#[command(about = "Multilinear function series, operator-valued S-transforms and their verification")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check S_xy = S_y·S_x∘(S_y⁻¹·I·S_y) on random pairs of free variables
    VerifyTwisted(VerifyArgs),
    /// Convert a moment series file into cumulants
    MomentsToCumulants(TransformArgs),
    /// Convert a cumulant series file into moments
    CumulantsToMoments(TransformArgs),
    /// S-transform of a moment series file (output order drops by one)
    STransform(TransformArgs),
    /// T-transform (inverse of the S-transform) of a moment series file
    TTransform(TransformArgs),
    /// Compare the product-moment recursion with the non-crossing partition sum
    OracleCompare(OracleArgs),
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Matrix size d of the base algebra M_d(C)
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=3))]
    pub dim: u32,

    /// Truncation order of the cumulant series
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..=6))]
    pub order: u32,

    /// Number of random pairs
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,

    /// Base seed; trial i uses seed + i
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Spread of the random cumulants
    #[arg(long, default_value_t = mfseries::random::DEFAULT_SCALE)]
    pub scale: f64,

    /// Absolute tolerance for every residual
    #[arg(long, env = TOL_ENV, default_value_t = 1e-8)]
    pub tol: f64,

    /// Emit one JSON object per trial
    #[arg(long)]
    pub json: bool,

    /// Include wall time in JSON reports (breaks byte-identical reruns)
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args)]
pub struct TransformArgs {
    /// Input series file
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,

    /// Output series file
    #[arg(long = "out", value_name = "FILE")]
    pub output: PathBuf,

    /// Tolerance for zero detection and factorization checks
    #[arg(long, env = TOL_ENV, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=3))]
    pub dim: u32,

    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=6))]
    pub order: u32,

    /// Highest degree checked against the partition sum
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(0..=4))]
    pub max_oracle_degree: u32,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = mfseries::random::DEFAULT_SCALE)]
    pub scale: f64,

    #[arg(long, env = TOL_ENV, default_value_t = 1e-10)]
    pub tol: f64,

    /// Emit the report as JSON
    #[arg(long)]
    pub json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::VerifyTwisted(args) => commands::verify_twisted(&args),
        Command::MomentsToCumulants(args) => {
            commands::transform(&args, commands::Transform::MomentsToCumulants)
        }
        Command::CumulantsToMoments(args) => {
            commands::transform(&args, commands::Transform::CumulantsToMoments)
        }
        Command::STransform(args) => commands::transform(&args, commands::Transform::S),
        Command::TTransform(args) => commands::transform(&args, commands::Transform::T),
        Command::OracleCompare(args) => commands::oracle_compare(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("error: {}", failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}
