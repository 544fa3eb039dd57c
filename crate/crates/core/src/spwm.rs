//! Uniformly sampled sinusoidal PWM.
//!
//! The half period is split into `N` equal slots of width `D = T / (2N)`.
//! Slot `j` carries one pulse centred in the slot with width
//! `m * D * sin(w * c_j)`, `c_j` being the slot centre.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PwmTrain, MERGE_TOLERANCE};

/// Pulses never fill more than this fraction of their slot, which keeps the
/// switching instants strictly ordered.
pub const MAX_DUTY: f64 = 1.0 - 1e-9;

pub const DEFAULT_MODULATION_INDEX: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpwmSpec {
    /// Pulses per half period.
    #[serde(rename = "N")]
    pub pulses: usize,
    /// Modulation index in `[0, 1]`.
    #[serde(rename = "m", default = "default_modulation")]
    pub modulation_index: f64,
    /// Fundamental frequency in hertz.
    #[serde(rename = "f")]
    pub frequency: f64,
    #[serde(rename = "V_o")]
    pub amplitude: f64,
}

fn default_modulation() -> f64 {
    DEFAULT_MODULATION_INDEX
}

impl SpwmSpec {
    pub fn new(pulses: usize, modulation_index: f64, frequency: f64, amplitude: f64) -> Result<Self> {
        let spec = Self { pulses, modulation_index, frequency, amplitude };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pulses == 0 {
            return Err(Error::InvalidParameter { name: "N", value: 0.0 });
        }
        if !(0.0..=1.0).contains(&self.modulation_index) {
            return Err(Error::InvalidParameter { name: "m", value: self.modulation_index });
        }
        if !(self.frequency.is_finite() && self.frequency > 0.0) {
            return Err(Error::InvalidParameter { name: "f", value: self.frequency });
        }
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            return Err(Error::InvalidParameter { name: "V_o", value: self.amplitude });
        }
        Ok(())
    }

    pub fn period(&self) -> f64 {
        1.0 / self.frequency
    }

    pub fn with_modulation_index(self, modulation_index: f64) -> Self {
        Self { modulation_index, ..self }
    }
}

/// Switching instants for `spec`, validated through [`PwmTrain::new`].
pub fn generate(spec: &SpwmSpec) -> Result<PwmTrain> {
    spec.validate()?;
    let period = spec.period();
    let omega = 2.0 * PI * spec.frequency;
    let slot = period / (2.0 * spec.pulses as f64);

    let mut instants = Vec::with_capacity(2 * spec.pulses);
    for j in 1..=spec.pulses {
        let centre = (j as f64 - 0.5) * slot;
        let width = (spec.modulation_index * slot * (omega * centre).sin()).min(slot * MAX_DUTY);
        if width <= MERGE_TOLERANCE * period {
            continue;
        }
        instants.push(centre - width / 2.0);
        instants.push(centre + width / 2.0);
    }
    PwmTrain::new(spec.amplitude, period, instants)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_modulation_is_empty() {
        let train = generate(&SpwmSpec::new(11, 0.0, 60.0, 100.0).unwrap()).unwrap();
        assert_eq!(train.pulse_count(), 0);
    }

    #[test]
    fn single_full_pulse() {
        let train = generate(&SpwmSpec::new(1, 1.0, 60.0, 100.0).unwrap()).unwrap();
        let t = train.period();
        assert_eq!(train.pulse_count(), 1);
        let [a, b] = [train.instants()[0], train.instants()[1]];
        assert!(a > 0.0 && b < t / 2.0);
        assert!((a + b - t / 2.0).abs() < 1e-15);
        assert!((b - a - t / 2.0).abs() < 1e-8 * t);
    }

    #[test]
    fn quarter_wave_symmetry() {
        let train = generate(&SpwmSpec::new(11, 0.9, 60.0, 100.0).unwrap()).unwrap();
        let t = train.instants();
        assert_eq!(t.len(), 22);
        let half = train.half_period();
        for k in 0..t.len() {
            let mirror = t[t.len() - 1 - k];
            assert!((t[k] + mirror - half).abs() <= 1e-12 * train.period());
        }
    }

    #[test]
    fn widths_peak_at_quarter_period() {
        let train = generate(&SpwmSpec::new(10, 0.8, 50.0, 1.0).unwrap()).unwrap();
        let widths: Vec<f64> = train.instants().chunks(2).map(|p| p[1] - p[0]).collect();
        let peak = widths.len() / 2;
        for j in 1..peak {
            assert!(widths[j] > widths[j - 1]);
        }
        for j in peak..widths.len() - 1 {
            assert!(widths[j + 1] < widths[j] + 1e-15);
        }
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(SpwmSpec::new(0, 0.5, 60.0, 1.0).is_err());
        assert!(SpwmSpec::new(3, 1.5, 60.0, 1.0).is_err());
        assert!(SpwmSpec::new(3, 0.5, 0.0, 1.0).is_err());
    }
}
