use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Parser, Subcommand};
use unidisc_core::report::Report;
use unidisc_core::CaseName;

use unidisc_cli::{
    cmd_analyze, cmd_gallery, cmd_simulate, cmd_sweep, exit, exit_code, parse_param, render, Format, Protocol,
    SimulateArgs, SwapState, UsageError, DEFAULT_TARGET,
};

/// Distinguishability of unitary channels and the query lower bounds it implies.
#[derive(Parser)]
#[command(name = "unidisc", version)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Seed for every sampled quantity.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Tolerance applied to every check.
    #[arg(long, default_value_t = 1e-9, global = true)]
    tolerance: f64,

    /// No summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,

    /// Report wall_time_ms as 0 so output is byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral analysis of a pair of unitaries stored as matrix JSON files.
    Analyze { u1: PathBuf, u2: PathBuf },

    /// Build the construction gallery and check every predicted value.
    Gallery {
        /// Run a single case.
        case: Option<CaseName>,
        /// Override a case parameter, e.g. `--param epsilon=0.25`.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
    },

    /// Simulate one of the discrimination protocols.
    Simulate {
        #[arg(value_enum)]
        protocol: Protocol,
        /// Eigenphase (in turns) for `qpe1`.
        #[arg(long, default_value_t = 0.0625)]
        theta: f64,
        /// Input state for `swap`.
        #[arg(long, value_enum, default_value_t = SwapState::Bell)]
        state: SwapState,
        /// Construction used by `copy`, `hamsim` and `bruteforce`.
        #[arg(long)]
        case: Option<CaseName>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        t_prime: Option<f64>,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        /// Objective evaluations for `bruteforce`.
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        /// Sampled repetitions; 0 reports exact probabilities only.
        #[arg(long, default_value_t = 0)]
        trials: u64,
    },

    /// Fewest phase-estimation queries reaching the target advantage, per epsilon.
    Sweep {
        /// Comma or space separated epsilons in (0, 0.1].
        #[arg(required = true, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
        epsilons: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_TARGET)]
        target: f64,
    },
}

fn run(cli: Cli) -> Result<Report> {
    if !(cli.tolerance.is_finite() && cli.tolerance >= 0.0) {
        return Err(UsageError(format!("tolerance {} must be a finite non-negative number", cli.tolerance)).into());
    }
    match cli.command {
        Command::Analyze { u1, u2 } => cmd_analyze(&u1, &u2, cli.tolerance),
        Command::Gallery { case, params } => cmd_gallery(case, &params, cli.tolerance),
        Command::Simulate {
            protocol,
            theta,
            state,
            case,
            epsilon,
            delta,
            t_prime,
            mut params,
            budget,
            trials,
        } => {
            let named = [("epsilon", epsilon), ("delta", delta), ("t_prime", t_prime)];
            params.extend(named.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))));
            cmd_simulate(&SimulateArgs {
                protocol,
                theta,
                state,
                case,
                params,
                budget,
                trials,
                seed: cli.seed,
                tolerance: cli.tolerance,
            })
        }
        Command::Sweep { epsilons, target } => cmd_sweep(&epsilons, target, cli.tolerance),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK } as u8);
        }
    };
    let (format, quiet, no_timing) = (cli.format, cli.quiet, cli.no_timing);
    let start = Instant::now();
    let mut report = match run(cli) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(exit_code(&err) as u8);
        }
    };
    if !no_timing {
        report.wall_time_ms = start.elapsed().as_millis() as u64;
    }
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(render(&report, format).as_bytes()).is_err() {
        return ExitCode::from(exit::NUMERICAL as u8);
    }
    let failed: Vec<_> = report.checks.iter().filter(|c| !c.pass).collect();
    if !quiet {
        eprintln!("{}: {}/{} checks pass", report.command, report.checks.len() - failed.len(), report.checks.len());
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        for c in failed {
            eprintln!("failed: {} (measured {}, expected {}, tolerance {})", c.name, c.measured, c.expected, c.tolerance);
        }
        ExitCode::from(exit::NUMERICAL as u8)
    }
}
