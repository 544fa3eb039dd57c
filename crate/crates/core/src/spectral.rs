//! Exact Fourier coefficients of piecewise-exponential waveforms, THD, ripple
//! and the `(L, C)` sweep for L-C-LR loads.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::closed_form;
use crate::error::{Error, Result};
use crate::model::{LclrLoad, PiecewiseExpSolution};
use crate::spwm::{self, SpwmSpec};

pub const DEFAULT_HARMONICS: usize = 200;

/// Sample count per half period used for peak-ripple search.
pub const DEFAULT_RIPPLE_SAMPLES: usize = 4096;

/// `|s - i n w|` below this fraction of `|s|` switches to the resonant limit.
const RESONANT_THRESHOLD: f64 = 1e-12;

/// Complex Fourier coefficients `c_n`, `n = 1..=n_max`, of a real
/// `T`-periodic waveform: `x(t) = sum_n c_n e^{i n w t} + c.c.`
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSpectrum {
    coefficients: Vec<Complex64>,
    fundamental_hz: f64,
}

impl HarmonicSpectrum {
    pub fn fundamental_hz(&self) -> f64 {
        self.fundamental_hz
    }

    pub fn n_max(&self) -> usize {
        self.coefficients.len()
    }

    /// `c_n` for `n >= 1`.
    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.coefficients[n - 1]
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Mean square carried by the retained harmonics (both signs of `n`).
    pub fn mean_square(&self) -> f64 {
        2.0 * self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// Fundamental component `2 Re(c_1 e^{i w t})` at time `t`.
    pub fn fundamental_at(&self, t: f64) -> f64 {
        let phase = 2.0 * std::f64::consts::PI * self.fundamental_hz * t;
        2.0 * (self.coefficients[0] * Complex64::from_polar(1.0, phase)).re
    }
}

/// `(e^{z h} - 1) / z`, with the `z -> 0` limit `h`.
fn exp_integral(z: Complex64, h: f64, limit: bool) -> Complex64 {
    if limit {
        return Complex64::new(h, 0.0);
    }
    let w = z * h;
    // e^{a + ib} - 1 = (expm1(a) cos b - 2 sin^2(b/2)) + i e^a sin b
    let (sin_b, cos_b) = w.im.sin_cos();
    let half_sin = (0.5 * w.im).sin();
    let em1 = Complex64::new(w.re.exp_m1() * cos_b - 2.0 * half_sin * half_sin, w.re.exp() * sin_b);
    em1 / z
}

/// Fourier coefficients up to `n_max`, integrated interval by interval in
/// closed form. Half-wave symmetry zeroes the even harmonics and doubles the
/// first-half integral of the odd ones.
pub fn spectrum(sol: &PiecewiseExpSolution, n_max: usize) -> Result<HarmonicSpectrum> {
    if n_max == 0 {
        return Err(Error::InvalidHarmonicCount);
    }
    let period = sol.period();
    let omega = sol.omega();
    let breakpoints = sol.breakpoints();
    let exponents = sol.exponents();

    let coefficients = (1..=n_max)
        .map(|n| {
            if n % 2 == 0 {
                return Complex64::new(0.0, 0.0);
            }
            let jw = Complex64::new(0.0, n as f64 * omega);
            let mut acc = Complex64::new(0.0, 0.0);
            for index in 0..sol.interval_count() {
                let (a, b) = (breakpoints[index], breakpoints[index + 1]);
                let h = b - a;
                if h == 0.0 {
                    continue;
                }
                let rotate = (-jw * a).exp();
                for (coeff, s) in sol.anchored_row(index).iter().zip(exponents) {
                    let z = s - jw;
                    let limit = z.norm() <= RESONANT_THRESHOLD * s.norm();
                    acc += coeff * rotate * exp_integral(z, h, limit);
                }
                let level = sol.forcing()[index];
                if level != 0.0 {
                    acc += level * ((-jw * b).exp() - rotate) / (-jw);
                }
            }
            acc * (2.0 / period)
        })
        .collect();

    Ok(HarmonicSpectrum { coefficients, fundamental_hz: 1.0 / period })
}

/// Total harmonic distortion in percent:
/// `100 * sqrt(sum_{n=2}^{n_max} |c_n|^2) / |c_1|`.
///
/// Harmonics above `n_max` are dropped. An output whose first `d - 1`
/// derivatives are continuous has `|c_n| = O(n^-(d+1))`, so the omitted tail
/// of the sum falls like `n_max^-(2d+1)`: with 11-pulse SPWM at 60 Hz and
/// `n_max = 200` the THD is low by about 3e-4 relative for an LR current,
/// 2e-5 for an L-RC output and 4e-8 for an L-C-LR output.
pub fn thd(spec: &HarmonicSpectrum) -> Result<f64> {
    let fundamental = spec.coefficients[0].norm();
    if fundamental == 0.0 {
        return Err(Error::ZeroFundamental);
    }
    let harmonics: f64 = spec.coefficients[1..].iter().map(|c| c.norm_sqr()).sum();
    Ok(100.0 * harmonics.sqrt() / fundamental)
}

/// Largest deviation of the output current from its fundamental, searched on
/// `samples` uniform points of the first half period plus every breakpoint.
/// Anti-periodicity makes the second half a mirror image.
pub fn peak_ripple(sol: &PiecewiseExpSolution, spec: &HarmonicSpectrum, samples: usize) -> Result<f64> {
    let half = sol.period() / 2.0;
    let uniform = (0..samples).map(|j| half * j as f64 / samples as f64);
    let mut worst: f64 = 0.0;
    for t in uniform.chain(sol.breakpoints().iter().copied()) {
        let deviation = sol.evaluate(t)? - spec.fundamental_at(t);
        worst = worst.max(deviation.abs());
    }
    Ok(worst * sol.output_current_scale())
}

/// THD and peak ripple of one solved waveform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicMetrics {
    pub thd_percent: f64,
    pub peak_ripple: f64,
}

pub fn metrics(sol: &PiecewiseExpSolution, n_max: usize) -> Result<HarmonicMetrics> {
    let spec = spectrum(sol, n_max)?;
    Ok(HarmonicMetrics { thd_percent: thd(&spec)?, peak_ripple: peak_ripple(sol, &spec, DEFAULT_RIPPLE_SAMPLES)? })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub inductance: f64,
    pub capacitance: f64,
    pub outcome: Result<HarmonicMetrics>,
}

/// Rows in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

/// Evaluates THD and ripple of the L-C-LR output current for each `(L, C)`
/// pair, keeping `L1` and `R` from `base`. Rows are independent; a failing
/// row records its error and the sweep continues.
pub fn sweep_lclr(base: &LclrLoad, train_spec: &SpwmSpec, pairs: &[(f64, f64)], n_max: usize) -> Result<SweepResult> {
    let train = spwm::generate(train_spec)?;
    let rows = pairs
        .par_iter()
        .map(|&(inductance, capacitance)| {
            let outcome = LclrLoad::new(inductance, capacitance, base.load_inductance, base.resistance)
                .and_then(|load| closed_form::solve_lclr(&load, &train))
                .and_then(|sol| metrics(&sol, n_max));
            SweepRow { inductance, capacitance, outcome }
        })
        .collect();
    Ok(SweepResult { rows })
}
