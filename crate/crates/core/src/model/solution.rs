use num_complex::Complex64;

use super::load::{LoadCircuit, StateVector};
use super::train::PwmTrain;
use crate::error::{Error, Result};

/// Allowed imaginary residue, relative to the summed magnitude of the terms.
pub const IMAGINARY_RESIDUE_TOLERANCE: f64 = 1e-9;

/// Physical variable a piecewise solution represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    /// The PWM source voltage `v_s` itself.
    SourceVoltage,
    /// Source-side inductor current `i`.
    InductorCurrent,
    /// Capacitor voltage `v_C`.
    CapacitorVoltage,
    /// Load current `i_1`.
    LoadCurrent,
}

impl OutputKind {
    pub fn symbol(&self) -> &'static str {
        match self {
            OutputKind::SourceVoltage => "v_s",
            OutputKind::InductorCurrent => "i",
            OutputKind::CapacitorVoltage => "v_C",
            OutputKind::LoadCurrent => "i_1",
        }
    }
}

/// Periodic steady-state waveform that is a sum of exponentials plus a
/// constant on every switching interval of the first half period, and the
/// negated copy of itself on the second half.
///
/// Coefficients are stored anchored at the left end of their interval: on
/// interval `k` (between `t_{k-1}` and `t_k`) the waveform is
/// `sum_m a[k][m] * exp(s_m * (t - t_{k-1})) + forcing[k]`. For stable roots
/// every stored exponential therefore has magnitude at most one. The
/// unanchored form `A_k exp(s_m t)` is available through
/// [`PiecewiseExpSolution::absolute_coefficients`].
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseExpSolution {
    kind: OutputKind,
    load: Option<LoadCircuit>,
    exponents: Vec<Complex64>,
    coeffs: Vec<Complex64>,
    forcing: Vec<f64>,
    breakpoints: Vec<f64>,
    period: f64,
}

impl PiecewiseExpSolution {
    /// Assembles a solution from raw parts. `coeffs[k][m]` is anchored at
    /// `breakpoints[k]`; `breakpoints` runs from `0` to `period / 2`.
    pub fn from_parts(
        kind: OutputKind,
        exponents: Vec<Complex64>,
        coeffs: Vec<Vec<Complex64>>,
        forcing: Vec<f64>,
        breakpoints: Vec<f64>,
        period: f64,
    ) -> Result<Self> {
        let rows = forcing.len();
        if rows == 0 {
            return Err(Error::MalformedSolution("no intervals".into()));
        }
        if coeffs.len() != rows || breakpoints.len() != rows + 1 {
            return Err(Error::MalformedSolution(format!(
                "{} coefficient rows and {} breakpoints for {} intervals",
                coeffs.len(),
                breakpoints.len(),
                rows
            )));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidParameter { name: "T", value: period });
        }
        if breakpoints[0] != 0.0 || breakpoints[rows] != period / 2.0 {
            return Err(Error::MalformedSolution("breakpoints must span [0, T/2]".into()));
        }
        if breakpoints.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::MalformedSolution("breakpoints must be non-decreasing".into()));
        }
        let cols = exponents.len();
        let mut flat = Vec::with_capacity(rows * cols);
        for row in coeffs {
            if row.len() != cols {
                return Err(Error::MalformedSolution("ragged coefficient table".into()));
            }
            flat.extend(row);
        }
        if flat.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::MalformedSolution("non-finite coefficient".into()));
        }
        Ok(Self { kind, load: None, exponents, coeffs: flat, forcing, breakpoints, period })
    }

    /// The source voltage of `train` expressed as a (root-free) piecewise
    /// waveform.
    pub fn source_voltage(train: &PwmTrain) -> Self {
        let breakpoints = train.breakpoints();
        let rows = breakpoints.len() - 1;
        let forcing = (1..=rows).map(|k| train.interval_level(k)).collect();
        Self {
            kind: OutputKind::SourceVoltage,
            load: None,
            exponents: Vec::new(),
            coeffs: Vec::new(),
            forcing,
            breakpoints,
            period: train.period(),
        }
    }

    pub(crate) fn with_load(mut self, load: LoadCircuit) -> Self {
        self.load = Some(load);
        self
    }

    pub fn kind(&self) -> OutputKind {
        self.kind
    }

    pub fn load(&self) -> Option<&LoadCircuit> {
        self.load.as_ref()
    }

    /// Exponents `s_m`, one per coefficient column.
    pub fn exponents(&self) -> &[Complex64] {
        &self.exponents
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn omega(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.period
    }

    /// Number of intervals `2N + 1` in the first half period.
    pub fn interval_count(&self) -> usize {
        self.forcing.len()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn forcing(&self) -> &[f64] {
        &self.forcing
    }

    /// Anchored coefficients of interval `index` (0-based).
    pub fn anchored_row(&self, index: usize) -> &[Complex64] {
        let cols = self.exponents.len();
        &self.coeffs[index * cols..(index + 1) * cols]
    }

    /// Coefficients `A_k, B_k, C_k` of the unanchored form
    /// `sum_m A_k exp(s_m t) + forcing[k]`, one row per interval.
    pub fn absolute_coefficients(&self) -> Result<Vec<Vec<Complex64>>> {
        (0..self.interval_count())
            .map(|index| {
                let start = self.breakpoints[index];
                self.anchored_row(index)
                    .iter()
                    .zip(&self.exponents)
                    .map(|(a, s)| {
                        let shift = (-s * start).exp();
                        let value = a * shift;
                        if shift.re.is_finite() && shift.im.is_finite() && value.re.is_finite() && value.im.is_finite()
                        {
                            Ok(value)
                        } else {
                            Err(Error::OverflowGuard { re: s.re, im: s.im, t: start })
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Multiplier that turns the output into the current through the load
    /// resistor (`1/R` for a capacitor-voltage output, one otherwise).
    pub fn output_current_scale(&self) -> f64 {
        match (self.kind, &self.load) {
            (OutputKind::CapacitorVoltage, Some(LoadCircuit::Lrc(load))) => 1.0 / load.resistance,
            _ => 1.0,
        }
    }

    /// Interval (0-based) containing `tau` in `[0, T/2)`, right-continuous.
    pub fn interval_of(&self, tau: f64) -> usize {
        let inner = &self.breakpoints[1..self.breakpoints.len() - 1];
        inner.partition_point(|&b| b <= tau)
    }

    /// Complex value of the `order`-th derivative of the interval expression
    /// `index`, evaluated at `t`. Returns the value and the summed term
    /// magnitudes.
    fn interval_terms(&self, index: usize, t: f64, order: u32) -> (Complex64, f64) {
        let start = self.breakpoints[index];
        let mut sum = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for (a, s) in self.anchored_row(index).iter().zip(&self.exponents) {
            let term = a * s.powu(order) * (s * (t - start)).exp();
            magnitude += term.norm();
            sum += term;
        }
        if order == 0 {
            sum += self.forcing[index];
            magnitude += self.forcing[index].abs();
        }
        (sum, magnitude)
    }

    /// Complex value of interval `index`'s expression (extended beyond its
    /// interval if needed), without the imaginary-residue check.
    pub fn interval_value(&self, index: usize, t: f64, order: u32) -> Complex64 {
        self.interval_terms(index, t, order).0
    }

    fn checked(&self, t: f64, value: Complex64, magnitude: f64) -> Result<f64> {
        if value.im.abs() > IMAGINARY_RESIDUE_TOLERANCE * magnitude {
            return Err(Error::ImaginaryResidueExceeded { t, residue: value.im });
        }
        Ok(value.re)
    }

    /// Waveform value at any time.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        self.derivative(t, 0)
    }

    /// `order`-th time derivative at any time (right limit at breakpoints).
    pub fn derivative(&self, t: f64, order: u32) -> Result<f64> {
        let mut tau = t.rem_euclid(self.period);
        let half = self.period / 2.0;
        let sign = if tau >= half {
            tau -= half;
            -1.0
        } else {
            1.0
        };
        let index = self.interval_of(tau);
        let (value, magnitude) = self.interval_terms(index, tau, order);
        Ok(sign * self.checked(t, value, magnitude)?)
    }

    /// Left and right limits of the `order`-th derivative at switching
    /// instant `t_k`, `k` in `1..=2N`.
    pub fn limits_at_instant(&self, k: usize, order: u32) -> (f64, f64) {
        let t = self.breakpoints[k];
        let left = self.interval_value(k - 1, t, order).re;
        let right = self.interval_value(k, t, order).re;
        (left, right)
    }

    /// `order`-th derivative at `0+` and at `T/2-`.
    pub fn boundary_limits(&self, order: u32) -> (f64, f64) {
        let last = self.interval_count() - 1;
        let start = self.interval_value(0, 0.0, order).re;
        let end = self.interval_value(last, self.period / 2.0, order).re;
        (start, end)
    }

    /// Every circuit state variable at `t`, recovered from the output and its
    /// derivatives through the state equations.
    pub fn state_at(&self, t: f64) -> Result<StateVector> {
        let x = self.evaluate(t)?;
        let state = match (self.kind, &self.load) {
            (OutputKind::InductorCurrent, Some(LoadCircuit::Lr(_))) => StateVector { i: Some(x), ..Default::default() },
            (OutputKind::CapacitorVoltage, Some(LoadCircuit::Lrc(load))) => {
                let dx = self.derivative(t, 1)?;
                StateVector { i: Some(load.capacitance * dx + x / load.resistance), v_c: Some(x), ..Default::default() }
            }
            (OutputKind::LoadCurrent, Some(LoadCircuit::Lclr(load))) => {
                let dx = self.derivative(t, 1)?;
                let ddx = self.derivative(t, 2)?;
                let v_c = load.load_inductance * dx + load.resistance * x;
                let i = load.capacitance * (load.load_inductance * ddx + load.resistance * dx) + x;
                StateVector { i: Some(i), i_1: Some(x), v_c: Some(v_c) }
            }
            _ => StateVector::default(),
        };
        Ok(state)
    }
}
