use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Instants closer than this fraction of the period are treated as coincident.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// A half-wave symmetric PWM voltage train.
///
/// On `(0, T/2)` the source alternates between `0` and `+V_o`, starting at `0`
/// and switching at each stored instant. The second half period is the
/// negated copy of the first.
#[derive(Debug, Clone, PartialEq)]
pub struct PwmTrain {
    amplitude: f64,
    period: f64,
    instants: Vec<f64>,
}

impl PwmTrain {
    /// Validates and builds a train.
    ///
    /// Adjacent instants closer than `1e-12 * T` are removed pairwise, which
    /// drops a zero-width pulse or joins two pulses across a zero-width gap.
    pub fn new(amplitude: f64, period: f64, instants: Vec<f64>) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(Error::InvalidParameter { name: "V_o", value: amplitude });
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidParameter { name: "T", value: period });
        }
        let half = period / 2.0;
        let tol = MERGE_TOLERANCE * period;

        for (index, &value) in instants.iter().enumerate() {
            if !(value.is_finite() && value > 0.0 && value < half) {
                return Err(Error::InstantOutOfRange { index, value });
            }
        }
        for (index, pair) in instants.windows(2).enumerate() {
            if pair[1] < pair[0] - tol {
                return Err(Error::NonMonotonicInstants { index: index + 1 });
            }
        }
        if !instants.len().is_multiple_of(2) {
            return Err(Error::OddInstantCount { count: instants.len() });
        }

        let mut merged: Vec<f64> = Vec::with_capacity(instants.len());
        for t in instants {
            match merged.last() {
                Some(&last) if t - last < tol => {
                    merged.pop();
                }
                _ => merged.push(t),
            }
        }

        Ok(Self { amplitude, period, instants: merged })
    }

    /// A train with no pulses; the source is identically zero.
    pub fn empty(amplitude: f64, period: f64) -> Result<Self> {
        Self::new(amplitude, period, Vec::new())
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn half_period(&self) -> f64 {
        self.period / 2.0
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn frequency(&self) -> f64 {
        1.0 / self.period
    }

    /// Switching instants `t_1 .. t_2N`.
    pub fn instants(&self) -> &[f64] {
        &self.instants
    }

    /// Number of pulses `N` in the half period.
    pub fn pulse_count(&self) -> usize {
        self.instants.len() / 2
    }

    /// Interval boundaries `t_0 = 0, t_1, .., t_2N, t_{2N+1} = T/2`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut points = Vec::with_capacity(self.instants.len() + 2);
        points.push(0.0);
        points.extend_from_slice(&self.instants);
        points.push(self.half_period());
        points
    }

    /// Source level on interval `k` (1-based) of the first half period.
    pub fn interval_level(&self, k: usize) -> f64 {
        if k.is_multiple_of(2) {
            self.amplitude
        } else {
            0.0
        }
    }

    /// Source voltage at any time. Exact switching instants take the
    /// right-limit value.
    pub fn source_at(&self, t: f64) -> f64 {
        let mut tau = t.rem_euclid(self.period);
        let half = self.half_period();
        let sign = if tau >= half {
            tau -= half;
            -1.0
        } else {
            1.0
        };
        let passed = self.instants.partition_point(|&x| x <= tau);
        if passed % 2 == 1 {
            sign * self.amplitude
        } else {
            0.0
        }
    }
}
