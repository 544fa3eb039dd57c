use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pwm_steady::cli::{self, CliFailure, SolveOptions, EXIT_FAILURE};
use pwm_steady::io::RunConfig;

#[derive(Parser)]
#[command(name = "pwm-steady", version)]
#[command(about = "Closed-form steady state of PWM inverters with LR, L-RC and L-C-LR loads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolveArgs {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// CSV output path (defaults to `output.csv` of the config, else stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Waveform samples per period
    #[arg(long)]
    grid: Option<usize>,
    /// Highest harmonic used for THD
    #[arg(long)]
    nmax: Option<usize>,
    /// Cross-check against the RK4 reference
    #[arg(long)]
    oracle: bool,
    /// Override the SPWM modulation index
    #[arg(long)]
    m: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the steady-state waveform as CSV and print a summary
    Solve(SolveArgs),
    /// Like `solve`, always running the RK4 cross-check
    Verify(SolveArgs),
    /// Print sinusoidal PWM switching instants, one per line
    Spwm {
        /// Pulses per half period
        #[arg(long, default_value_t = 11)]
        n: usize,
        #[arg(long, default_value_t = 0.9)]
        m: f64,
        /// Fundamental frequency in hertz
        #[arg(long, default_value_t = 60.0)]
        f: f64,
        /// Pulse amplitude in volts
        #[arg(long = "vo", default_value_t = 100.0)]
        vo: f64,
    },
    /// THD and ripple of an L-C-LR load over a list of (L, C) pairs
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        m: Option<f64>,
    },
}

fn emit(bytes: &[u8], path: Option<PathBuf>) -> Result<bool, CliFailure> {
    let io_failure = |e: io::Error| CliFailure { code: EXIT_FAILURE, message: e.to_string() };
    match path {
        Some(path) => {
            fs::write(&path, bytes).map_err(io_failure)?;
            Ok(false)
        }
        None => {
            io::stdout().write_all(bytes).map_err(io_failure)?;
            Ok(true)
        }
    }
}

fn run_solve(args: SolveArgs, verify: bool) -> Result<(), CliFailure> {
    let config = RunConfig::load(&args.config)?;
    let opts = SolveOptions { grid: args.grid, nmax: args.nmax, oracle: args.oracle, modulation_index: args.m };
    let output = if verify { cli::verify(&config, &opts)? } else { cli::solve(&config, &opts)? };
    for warning in &output.warnings {
        eprintln!("{warning}");
    }
    let to_stdout = emit(&output.csv, args.out.or(config.output.csv.clone()))?;
    if to_stdout {
        eprint!("{}", output.summary);
    } else {
        print!("{}", output.summary);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliFailure> {
    match cli.command {
        Command::Solve(args) => run_solve(args, false),
        Command::Verify(args) => run_solve(args, true),
        Command::Spwm { n, m, f, vo } => {
            print!("{}", cli::spwm(n, m, f, vo)?);
            Ok(())
        }
        Command::Sweep { config, out, nmax, m } => {
            let config = RunConfig::load(&config)?;
            let csv = cli::sweep(&config, nmax, m)?;
            emit(&csv, out.or(config.output.csv.clone()))?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code as u8)
        }
    }
}
