//! Run configuration (JSON) and CSV emission.
//!
//! A configuration document looks like
//!
//! ```json
//! {
//!   "circuit":    { "kind": "lclr", "L": 30e-6, "C": 20e-6, "L1": 300e-6, "R": 1.0 },
//!   "excitation": { "type": "spwm", "N": 11, "m": 0.9, "f": 60.0, "V_o": 100.0 },
//!   "output":     { "grid": 2048, "nmax": 200, "oracle": false, "csv": "out.csv" },
//!   "sweep":      { "pairs": [[50e-6, 5e-6], [40e-6, 12e-6]] }
//! }
//! ```
//!
//! `circuit.kind` is one of `lr` (`R`, `L`), `lrc` (`L`, `R`, `C`) or `lclr`
//! (`L`, `C`, `L1`, `R`). An explicit excitation is
//! `{ "type": "instants", "f": 60, "V_o": 100, "instants": [..] }` or the same
//! with `"instants_file": "path"` (one instant per line, `-` for stdin).
//! All values are in SI units; `output` and `sweep` are optional.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::model::{LoadCircuit, PiecewiseExpSolution, PwmTrain};
use crate::spectral::SweepResult;
use crate::spwm::{self, SpwmSpec};

pub const DEFAULT_GRID: usize = 2048;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("malformed configuration: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("invalid configuration: {0}")]
    Model(#[from] crate::Error),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Excitation {
    Spwm(SpwmSpec),
    Instants {
        #[serde(rename = "f")]
        frequency: f64,
        #[serde(rename = "V_o")]
        amplitude: f64,
        #[serde(default)]
        instants: Option<Vec<f64>>,
        #[serde(default)]
        instants_file: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputOptions {
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_nmax")]
    pub nmax: usize,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

fn default_nmax() -> usize {
    crate::spectral::DEFAULT_HARMONICS
}

impl Default for OutputOptions {
    fn default() -> Self {
        Self { grid: DEFAULT_GRID, nmax: default_nmax(), oracle: false, csv: None }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOptions {
    /// `(L, C)` pairs in henries and farads.
    pub pairs: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub circuit: LoadCircuit,
    pub excitation: Excitation,
    #[serde(default)]
    pub output: OutputOptions,
    #[serde(default)]
    pub sweep: Option<SweepOptions>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: RunConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        self.circuit.validate()?;
        if self.output.grid < 2 {
            return Err(ConfigError::Invalid(format!("grid must be at least 2, got {}", self.output.grid)));
        }
        if self.output.nmax == 0 {
            return Err(ConfigError::Invalid("nmax must be positive".into()));
        }
        match &self.excitation {
            Excitation::Spwm(spec) => spec.validate()?,
            Excitation::Instants { instants, instants_file, .. } => {
                if instants.is_some() == instants_file.is_some() {
                    return Err(ConfigError::Invalid(
                        "exactly one of `instants` and `instants_file` is required".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Builds the excitation. `modulation_index` overrides `m` of an SPWM
    /// excitation and is ignored for explicit instants.
    pub fn train(&self, modulation_index: Option<f64>) -> Result<PwmTrain, ConfigError> {
        match &self.excitation {
            Excitation::Spwm(spec) => {
                let spec = match modulation_index {
                    Some(m) => spec.with_modulation_index(m),
                    None => *spec,
                };
                Ok(spwm::generate(&spec)?)
            }
            Excitation::Instants { frequency, amplitude, instants, instants_file } => {
                if !(frequency.is_finite() && *frequency > 0.0) {
                    return Err(crate::Error::InvalidParameter { name: "f", value: *frequency }.into());
                }
                let times = match (instants, instants_file) {
                    (Some(list), _) => list.clone(),
                    (None, Some(path)) => read_instants(path)?,
                    (None, None) => unreachable!("validated"),
                };
                Ok(PwmTrain::new(*amplitude, 1.0 / frequency, times)?)
            }
        }
    }

    /// The SPWM excitation, if that is what the configuration uses.
    pub fn spwm_spec(&self, modulation_index: Option<f64>) -> Option<SpwmSpec> {
        match &self.excitation {
            Excitation::Spwm(spec) => Some(match modulation_index {
                Some(m) => spec.with_modulation_index(m),
                None => *spec,
            }),
            Excitation::Instants { .. } => None,
        }
    }
}

fn read_instants(path: &Path) -> Result<Vec<f64>, ConfigError> {
    let text = if path == Path::new("-") {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        buf
    } else {
        fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?
    };
    parse_instants(&text)
}

/// One instant per line; blank lines and `#` comments are skipped.
pub fn parse_instants(text: &str) -> Result<Vec<f64>, ConfigError> {
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(|line| {
            line.parse::<f64>().map_err(|_| ConfigError::Invalid(format!("cannot parse switching instant `{line}`")))
        })
        .collect()
}

/// 17 significant digits; parses back to the identical `f64`.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

fn optional(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

/// Waveform table with header `t,v_s,output,i,i_1,v_C`, `grid` rows over
/// `[0, T)`. State columns the circuit lacks are left empty.
pub fn write_waveform<W: Write>(out: W, sol: &PiecewiseExpSolution, train: &PwmTrain, grid: usize) -> crate::Result<W> {
    let mut writer = csv_writer(out);
    let io_err = |e: csv::Error| crate::Error::MalformedSolution(format!("csv: {e}"));
    writer.write_record(["t", "v_s", "output", "i", "i_1", "v_C"]).map_err(io_err)?;
    let period = train.period();
    for j in 0..grid {
        let t = period * j as f64 / grid as f64;
        let state = sol.state_at(t)?;
        writer
            .write_record([
                format_number(t),
                format_number(train.source_at(t)),
                format_number(sol.evaluate(t)?),
                optional(state.i),
                optional(state.i_1),
                optional(state.v_c),
            ])
            .map_err(io_err)?;
    }
    writer.into_inner().map_err(|e| crate::Error::MalformedSolution(format!("csv: {e}")))
}

/// Sweep table with header `L_uH,C_uF,THD_percent,peak_ripple,status`.
pub fn write_sweep<W: Write>(out: W, result: &SweepResult) -> io::Result<W> {
    let mut writer = csv_writer(out);
    writer.write_record(["L_uH", "C_uF", "THD_percent", "peak_ripple", "status"])?;
    for row in &result.rows {
        let l = format_number(row.inductance * 1e6);
        let c = format_number(row.capacitance * 1e6);
        let record = match &row.outcome {
            Ok(m) => [l, c, format_number(m.thd_percent), format_number(m.peak_ripple), "ok".to_string()],
            Err(e) => [l, c, String::new(), String::new(), e.to_string()],
        };
        writer.write_record(&record)?;
    }
    writer.into_inner().map_err(|e| e.into_error())
}

/// One instant per line at 17 significant digits.
pub fn format_instants(train: &PwmTrain) -> String {
    train.instants().iter().map(|&t| format_number(t) + "\n").collect()
}
