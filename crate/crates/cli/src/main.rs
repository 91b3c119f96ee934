//! Command-line front end: exact tail probabilities, rate functions,
//! samplers and convergence tables as CSV or JSON.

mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    CltArgs, ConvergeArgs, MatrixArgs, PredictArgs, ProbArgs, RateArgs, SampleArgs, VerifyArgs,
};
use output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "chiral-ldp",
    version,
    about = "Extreme eigenvalue moduli of the chiral Ginibre ensemble"
)]
struct Cli {
    /// Output format on stdout.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a rate function or moderate-deviation rate.
    Rate(RateArgs),
    /// Exact log-probability of a tail event of the largest or smallest modulus.
    Prob(ProbArgs),
    /// Draw from the independent-moduli model.
    Sample(SampleArgs),
    /// Extreme moduli of sampled product matrices.
    Matrix(MatrixArgs),
    /// Exact probabilities against a limit theorem over a grid.
    Converge(ConvergeArgs),
    /// Exact maximum tail against its Gumbel approximation.
    Clt(CltArgs),
    /// Single-index tail predictors against exact values.
    Predict(PredictArgs),
    /// Run the invariant suites.
    Verify(VerifyArgs),
}

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("CHIRAL_LDP_THREADS") else {
        return Ok(());
    };
    let k: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| format!("CHIRAL_LDP_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let outcome = match cli.command {
        Command::Rate(a) => commands::rate(a),
        Command::Prob(a) => commands::prob(a),
        Command::Sample(a) => commands::sample(a),
        Command::Matrix(a) => commands::matrix(a),
        Command::Converge(a) => commands::converge(a),
        Command::Clt(a) => commands::clt(a),
        Command::Predict(a) => commands::predict(a),
        Command::Verify(a) => commands::verify(a),
    };
    match outcome {
        Ok(out) => {
            for d in &out.record.diagnostics {
                eprintln!("warning: {d}");
            }
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            if let Err(e) = out
                .record
                .write(cli.format, &mut lock)
                .and_then(|_| lock.flush())
            {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_NUMERIC);
                }
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit)
        }
    }
}
