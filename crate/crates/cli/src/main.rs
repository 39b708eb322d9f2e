//! `wclab` — command-line front end for the weak-coupling eigenvalue
//! laboratory.
//!
//! Every subcommand reads one versioned JSON configuration (see
//! [`config`]) and emits one deterministic table (see [`emit`]): reruns of
//! the same configuration produce byte-identical output. Flags override
//! the corresponding configuration fields.

mod config;
mod emit;
mod run;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

use config::{Format, Overrides};
use run::CommandKind;

const EXIT_CODES_HELP: &str = "Exit codes:
  0  success
  1  configuration error
  2  numerical failure in at least one row
  3  calibration inconsistency (a verdict disagrees with certified numerics)";

/// Computes, classifies, and independently verifies weakly coupled
/// eigenvalues of one- and two-dimensional Schrödinger operators with
/// complex potentials.
#[derive(Parser)]
#[command(name = "wclab", version, after_help = EXIT_CODES_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure potential moments: U, U₁, the Rollnik-type integral, and
    /// refinement error estimates (plus the α* threshold for the
    /// `v_alpha` family).
    Moments(RunArgs),
    /// Classify each configured coupling and cross-check it against the
    /// certified integral-equation solver, one row per coupling.
    Sweep(RunArgs),
    /// Rasterize the spectral-parameter domain Ω or a coupling-plane
    /// verdict map over the configured window.
    Region(RunArgs),
    /// Verify that classifier verdicts agree with certified solver
    /// outcomes on the configured coupling grid.
    Calibrate(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Write output here (overrides the configuration; default stdout).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format (overrides the configuration; default csv).
    #[arg(long, value_name = "FMT")]
    format: Option<Format>,
    /// Solver nodes per axis (overrides the configuration).
    #[arg(long, value_name = "N")]
    nodes: Option<usize>,
    /// Quadrature order for moment integrals (overrides the
    /// configuration).
    #[arg(long, value_name = "Q")]
    quad_order: Option<usize>,
    /// Accepted for interface stability; the standard commands are fully
    /// deterministic and do not consume randomness.
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
}

fn main() {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Moments(args) => (CommandKind::Moments, args),
        Command::Sweep(args) => (CommandKind::Sweep, args),
        Command::Region(args) => (CommandKind::Region, args),
        Command::Calibrate(args) => (CommandKind::Calibrate, args),
    };
    let _ = args.seed;
    let overrides = Overrides {
        out: args.out,
        format: args.format,
        nodes: args.nodes,
        quad_order: args.quad_order,
    };
    let code = match config::load(&args.config, &overrides)
        .map_err(run::CliError::from)
        .and_then(|resolved| run::execute(kind, &resolved))
    {
        Ok(code) => code,
        Err(err) => {
            eprintln!("wclab: {err}");
            err.exit_code()
        }
    };
    std::process::exit(code);
}
