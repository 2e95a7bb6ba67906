use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quatdecomp::cli::{execute, to_json, Command, RunOptions};

#[derive(Parser)]
#[command(name = "quatdecomp", version, about = "Rank-one decompositions of quaternion PSD matrices and their applications")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Sub {
    /// Equal-inner-product rank-one decomposition of X against A1..A4
    Decompose { input: PathBuf },
    /// Vector reaching a target in the joint numerical range of A1..A5
    Jnr { input: PathBuf },
    /// S-procedure multipliers for A0 against A1..A4, or a witness
    Sproc { input: PathBuf },
    /// QCQP with up to four constraints via its SDP relaxation
    Qcqp { input: PathBuf },
    /// Parse and validate a problem file
    Check { input: PathBuf },
}

#[derive(Args)]
struct Flags {
    /// Master relative tolerance
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// SDP iteration cap
    #[arg(long, global = true, default_value_t = 200)]
    max_iter: usize,
    /// Seed for every sampling step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Result file path (stdout when absent)
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Skip the verification pass
    #[arg(long, global = true)]
    no_verify: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, input) = match cli.command {
        Sub::Decompose { input } => (Command::Decompose, input),
        Sub::Jnr { input } => (Command::Jnr, input),
        Sub::Sproc { input } => (Command::Sproc, input),
        Sub::Qcqp { input } => (Command::Qcqp, input),
        Sub::Check { input } => (Command::Check, input),
    };
    let opts = RunOptions {
        tol: cli.flags.tol,
        max_iter: cli.flags.max_iter,
        seed: cli.flags.seed,
        verify: !cli.flags.no_verify,
    };
    let result = execute(cmd, &input, &opts);
    let text = to_json(&result);
    match &cli.flags.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if let Some(msg) = &result.message {
        eprintln!("{}: {msg}", cmd.name());
    }
    ExitCode::from(result.exit_code() as u8)
}
