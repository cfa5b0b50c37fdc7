//! `sqg`: simulations, Picard runs, snapshot analysis and inequality checks.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Failure;

/// Exit status for usage and configuration errors.
const EXIT_USAGE: u8 = 2;
const EXIT_BLOW_UP: u8 = 3;
const EXIT_CHECK_FAILED: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "sqg",
    version,
    about = "Dissipative SQG solver and Gevrey/Besov verification harness"
)]
struct Cli {
    /// Run config file of key=value lines.
    #[arg(long, short, global = true, env = "SQG_CONFIG_FILE")]
    config: Option<PathBuf>,

    /// Output directory, created if missing.
    #[arg(
        long,
        short,
        global = true,
        env = "SQG_OUT_DIR",
        default_value = "sqg-out"
    )]
    out: PathBuf,

    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Solve the nonlinear equation; write snapshots and diagnostics.
    Simulate {
        /// key=value overrides, applied last.
        overrides: Vec<String>,
    },
    /// Run the Picard iterates alongside the full solve; write per-level
    /// diagnostics and a convergence table.
    Picard { overrides: Vec<String> },
    /// Besov blocks, radius estimate and X_T norm of saved snapshots.
    Analyze {
        /// Snapshot file; repeat for a trajectory.
        #[arg(long = "input", short, required = true)]
        inputs: Vec<PathBuf>,
        overrides: Vec<String>,
    },
    /// Run inequality checks and write a report bundle.
    Verify {
        /// Check id; repeat to select several (default: all).
        #[arg(long = "check")]
        checks: Vec<String>,
        /// Run parameter sets outside the hypotheses and tag the reports.
        #[arg(long)]
        unenforced: bool,
        /// Evaluate pointwise powers on a 2x padded grid.
        #[arg(long)]
        padding: bool,
        overrides: Vec<String>,
    },
    /// List the registered bilinear symbols.
    Symbols,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.verb {
        Verb::Simulate { overrides } => {
            commands::simulate(cli.config.as_deref(), &cli.out, &overrides)
        }
        Verb::Picard { overrides } => commands::picard(cli.config.as_deref(), &cli.out, &overrides),
        Verb::Analyze { inputs, overrides } => {
            commands::analyze(cli.config.as_deref(), &cli.out, &inputs, &overrides)
        }
        Verb::Verify {
            checks,
            unenforced,
            padding,
            overrides,
        } => commands::verify(
            cli.config.as_deref(),
            &cli.out,
            &checks,
            commands::VerifyFlags {
                unenforced,
                padding,
            },
            &overrides,
        ),
        Verb::Symbols => commands::symbols(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("sqg: {failure}");
            ExitCode::from(match failure {
                Failure::Core(_) | Failure::Usage(_) => EXIT_USAGE,
                Failure::BlowUp { .. } => EXIT_BLOW_UP,
                Failure::Checks { .. } => EXIT_CHECK_FAILED,
            })
        }
    }
}
