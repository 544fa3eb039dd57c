//! Subcommand bodies behind the `pwm-steady` binary. Each returns the bytes
//! to emit, or a failure carrying the process exit code.

use std::fmt::Write as _;

use crate::closed_form;
use crate::error::Error;
use crate::io::{self, ConfigError, RunConfig};
use crate::model::{LclrLoad, LoadCircuit};
use crate::oracle::{self, OracleConfig};
use crate::root_finder;
use crate::spectral::{self, DEFAULT_RIPPLE_SAMPLES};
use crate::spwm::{self, SpwmSpec};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_REPEATED_ROOTS: i32 = 3;
pub const EXIT_NOT_SETTLED: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;

/// Largest closed-form vs RK4 deviation `verify` accepts.
pub const VERIFY_TOLERANCE: f64 = 1e-5;

/// Separation below which the summary warns about ill-conditioned roots.
const CONDITION_WARNING: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct CliFailure {
    pub code: i32,
    pub message: String,
}

impl From<ConfigError> for CliFailure {
    fn from(e: ConfigError) -> Self {
        Self { code: EXIT_CONFIG, message: e.to_string() }
    }
}

impl From<Error> for CliFailure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::RepeatedRoots { .. } => EXIT_REPEATED_ROOTS,
            Error::NotSettled { .. } => EXIT_NOT_SETTLED,
            _ => EXIT_FAILURE,
        };
        Self { code, message: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolveOptions {
    pub grid: Option<usize>,
    pub nmax: Option<usize>,
    pub oracle: bool,
    pub modulation_index: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutput {
    pub csv: Vec<u8>,
    pub summary: String,
    pub oracle_deviation: Option<f64>,
    /// Non-fatal diagnostics for standard error.
    pub warnings: Vec<String>,
}

fn describe(load: &LoadCircuit) -> String {
    let v = io::format_number;
    match load {
        LoadCircuit::Lr(l) => format!("LR (R={}, L={})", v(l.resistance), v(l.inductance)),
        LoadCircuit::Lrc(l) => format!("L-RC (L={}, R={}, C={})", v(l.inductance), v(l.resistance), v(l.capacitance)),
        LoadCircuit::Lclr(l) => format!(
            "L-C-LR (L={}, C={}, L1={}, R={})",
            v(l.inductance),
            v(l.capacitance),
            v(l.load_inductance),
            v(l.resistance)
        ),
    }
}

pub fn solve(config: &RunConfig, opts: &SolveOptions) -> Result<SolveOutput, CliFailure> {
    let grid = opts.grid.unwrap_or(config.output.grid);
    let nmax = opts.nmax.unwrap_or(config.output.nmax);
    if grid < 2 {
        return Err(ConfigError::Invalid(format!("grid must be at least 2, got {grid}")).into());
    }
    if nmax == 0 {
        return Err(ConfigError::Invalid("nmax must be positive".into()).into());
    }
    let train = config.train(opts.modulation_index)?;
    let roots = root_finder::roots(&config.circuit)?;
    let sol = closed_form::solve(&config.circuit, &train)?;

    let mut warnings = Vec::new();
    if roots.min_relative_separation() < CONDITION_WARNING {
        warnings.push(format!(
            "warning: characteristic roots nearly coincide (relative separation {:.3e})",
            roots.min_relative_separation()
        ));
    }

    let oracle_deviation = if opts.oracle || config.output.oracle {
        let trajectory = oracle::integrate(&config.circuit, &train, &OracleConfig::default())?;
        Some(oracle::compare(&sol, &trajectory)?)
    } else {
        None
    };

    let csv = io::write_waveform(Vec::new(), &sol, &train, grid)?;

    let spec = spectral::spectrum(&sol, nmax)?;
    let mut summary = String::new();
    let _ = writeln!(summary, "circuit: {}", describe(&config.circuit));
    let _ = writeln!(summary, "output: {}", sol.kind().symbol());
    let _ = writeln!(summary, "pulses: {}", train.pulse_count());
    let roots_text: Vec<String> =
        roots.as_slice().iter().map(|s| format!("{}{:+.16e}i", io::format_number(s.re), s.im)).collect();
    let _ = writeln!(summary, "roots: {}", roots_text.join(", "));
    match spectral::thd(&spec) {
        Ok(thd) => {
            let _ = writeln!(summary, "THD_percent: {}", io::format_number(thd));
        }
        Err(_) => {
            let _ = writeln!(summary, "THD_percent: undefined (zero fundamental)");
        }
    }
    let ripple = spectral::peak_ripple(&sol, &spec, DEFAULT_RIPPLE_SAMPLES)?;
    let _ = writeln!(summary, "peak_ripple: {}", io::format_number(ripple));
    if let Some(dev) = oracle_deviation {
        let _ = writeln!(summary, "oracle_deviation: {}", io::format_number(dev));
    }

    Ok(SolveOutput { csv, summary, oracle_deviation, warnings })
}

/// `solve` with the oracle forced on; fails when the deviation exceeds
/// [`VERIFY_TOLERANCE`].
pub fn verify(config: &RunConfig, opts: &SolveOptions) -> Result<SolveOutput, CliFailure> {
    let output = solve(config, &SolveOptions { oracle: true, ..*opts })?;
    let deviation = output.oracle_deviation.unwrap_or(f64::INFINITY);
    if deviation > VERIFY_TOLERANCE {
        return Err(CliFailure {
            code: EXIT_VERIFY_FAILED,
            message: format!("oracle deviation {deviation:.3e} exceeds {VERIFY_TOLERANCE:.0e}"),
        });
    }
    Ok(output)
}

pub fn spwm(pulses: usize, modulation_index: f64, frequency: f64, amplitude: f64) -> Result<String, CliFailure> {
    let spec = SpwmSpec::new(pulses, modulation_index, frequency, amplitude)
        .map_err(|e| CliFailure { code: EXIT_CONFIG, message: e.to_string() })?;
    Ok(io::format_instants(&spwm::generate(&spec)?))
}

pub fn sweep(config: &RunConfig, nmax: Option<usize>, modulation_index: Option<f64>) -> Result<Vec<u8>, CliFailure> {
    let LoadCircuit::Lclr(base) = config.circuit else {
        return Err(ConfigError::Invalid("sweep requires an lclr circuit".into()).into());
    };
    let spec = config
        .spwm_spec(modulation_index)
        .ok_or_else(|| ConfigError::Invalid("sweep requires an spwm excitation".into()))?;
    let pairs = config
        .sweep
        .as_ref()
        .map(|s| s.pairs.clone())
        .ok_or_else(|| ConfigError::Invalid("missing `sweep.pairs`".into()))?;
    let nmax = nmax.unwrap_or(config.output.nmax);
    if nmax == 0 {
        return Err(ConfigError::Invalid("nmax must be positive".into()).into());
    }
    let base: LclrLoad = base;
    let result = spectral::sweep_lclr(&base, &spec, &pairs, nmax)?;
    io::write_sweep(Vec::new(), &result).map_err(|e| CliFailure { code: EXIT_FAILURE, message: e.to_string() })
}
