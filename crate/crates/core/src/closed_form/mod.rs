//! Closed-form periodic steady state for PWM-driven linear loads.
//!
//! Continuity of the output and its first `n - 1` derivatives at every
//! switching instant, with `n` the circuit order, decouples into one
//! two-diagonal recurrence per characteristic root:
//!
//! ```text
//! c_k - c_{k+1} = w * (chi_{k+1} - chi_k) * exp(-s t_k),   w = prod_{j != m} s_j / (s_j - s)
//! ```
//!
//! closed by the half-wave anti-periodic boundary condition
//! `c_1 + c_{2N+1} exp(s T/2) = 0`. For two roots `w = s_2 / (s_2 - s_1)`,
//! for three roots `w = s_2 s_3 / ((s_1 - s_2)(s_1 - s_3))`, and for one root
//! `w = 1`. The remaining columns follow by permuting which root plays `s_1`.
//!
//! The recurrence is run on coefficients anchored at the left end of each
//! interval (`a_k = c_k exp(s t_{k-1})`), so every exponential that appears
//! has a non-positive real exponent. [`literal`] evaluates the unanchored
//! formulas term by term for comparison.

pub mod literal;

use num_complex::Complex64;

use crate::error::Result;
use crate::model::{LclrLoad, LoadCircuit, LrLoad, LrcLoad, OutputKind, PiecewiseExpSolution, PwmTrain};
use crate::root_finder;

/// Anchored recurrence coefficients, one column per root.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    exponents: Vec<Complex64>,
    /// `columns[m][k]`: anchored coefficient of interval `k + 1` for root `m`.
    columns: Vec<Vec<Complex64>>,
    /// `increments[m][n]`: jump `c_{n+1} - c_{n+2}` scaled to the anchor, for
    /// instants `n + 1 = 1..2N`.
    increments: Vec<Vec<Complex64>>,
    forcing: Vec<f64>,
    breakpoints: Vec<f64>,
    period: f64,
}

impl CoefficientTable {
    /// Steady-state coefficients for an output whose particular solution is
    /// `forcing_scale` while the source is on and zero while it is off.
    /// Column `m` treats `exponents[m]` as the distinguished root.
    pub fn new(exponents: &[Complex64], forcing_scale: f64, train: &PwmTrain) -> Self {
        let breakpoints = train.breakpoints();
        let rows = breakpoints.len() - 1;
        let forcing: Vec<f64> = (1..=rows).map(|k| if k % 2 == 0 { forcing_scale } else { 0.0 }).collect();
        let half = train.half_period();

        let mut columns = Vec::with_capacity(exponents.len());
        let mut increments = Vec::with_capacity(exponents.len());
        for (m, &s) in exponents.iter().enumerate() {
            let weight = exponents
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != m)
                .fold(Complex64::new(1.0, 0.0), |acc, (_, &sj)| acc * sj / (sj - s));

            let deltas: Vec<Complex64> = (1..rows).map(|n| weight * (forcing[n] - forcing[n - 1])).collect();

            let closure: Complex64 =
                deltas.iter().zip(&breakpoints[1..rows]).map(|(d, &t)| d * (s * (half - t)).exp()).sum();
            let first = closure / ((s * half).exp() + 1.0);

            let mut column = Vec::with_capacity(rows);
            column.push(first);
            for k in 1..rows {
                let span = breakpoints[k] - breakpoints[k - 1];
                let next = column[k - 1] * (s * span).exp() - deltas[k - 1];
                column.push(next);
            }
            columns.push(column);
            increments.push(deltas);
        }

        let mut table =
            Self { exponents: exponents.to_vec(), columns, increments, forcing, breakpoints, period: train.period() };
        table.enforce_conjugate_symmetry();
        table
    }

    fn enforce_conjugate_symmetry(&mut self) {
        for m in 0..self.exponents.len() {
            let s = self.exponents[m];
            if s.im <= 0.0 {
                continue;
            }
            let Some(p) = self.exponents.iter().position(|r| *r == s.conj()) else {
                continue;
            };
            for k in 0..self.columns[m].len() {
                let avg = (self.columns[m][k] + self.columns[p][k].conj()) * 0.5;
                self.columns[m][k] = avg;
                self.columns[p][k] = avg.conj();
            }
        }
    }

    pub fn exponents(&self) -> &[Complex64] {
        &self.exponents
    }

    /// Anchored coefficients of root `m` for intervals `1..=2N+1`.
    pub fn column(&self, m: usize) -> &[Complex64] {
        &self.columns[m]
    }

    /// Leading coefficient (`A_1`, `B_1` or `C_1`) of root `m`; anchoring at
    /// `t_0 = 0` makes it equal to the unanchored value.
    pub fn leading(&self, m: usize) -> Complex64 {
        self.columns[m][0]
    }

    /// Largest relative residual of `c_1 + c_{2N+1} exp(s T/2) = 0` over all
    /// columns.
    pub fn closure_residual(&self) -> f64 {
        let half = self.period / 2.0;
        let rows = self.forcing.len();
        let last_start = self.breakpoints[rows - 1];
        self.exponents
            .iter()
            .zip(&self.columns)
            .map(|(s, col)| {
                let end = col[rows - 1] * (s * (half - last_start)).exp();
                let scale = col[0].norm().max(end.norm());
                if scale == 0.0 {
                    0.0
                } else {
                    (col[0] + end).norm() / scale
                }
            })
            .fold(0.0, f64::max)
    }

    /// Largest relative residual of the per-instant recurrence.
    pub fn telescoping_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for ((s, col), deltas) in self.exponents.iter().zip(&self.columns).zip(&self.increments) {
            for (k, delta) in deltas.iter().enumerate() {
                let span = self.breakpoints[k + 1] - self.breakpoints[k];
                let carried = col[k] * (s * span).exp();
                let scale = carried.norm().max(col[k + 1].norm()).max(delta.norm());
                if scale > 0.0 {
                    worst = worst.max((carried - col[k + 1] - delta).norm() / scale);
                }
            }
        }
        worst
    }

    pub fn into_solution(self, kind: OutputKind) -> Result<PiecewiseExpSolution> {
        let rows = self.forcing.len();
        let coeffs = (0..rows).map(|k| self.columns.iter().map(|col| col[k]).collect()).collect();
        PiecewiseExpSolution::from_parts(kind, self.exponents, coeffs, self.forcing, self.breakpoints, self.period)
    }
}

/// Steady-state inductor current of an LR load.
pub fn solve_lr(load: &LrLoad, train: &PwmTrain) -> Result<PiecewiseExpSolution> {
    let roots = root_finder::roots_lr(load)?;
    let table = CoefficientTable::new(roots.as_slice(), train.amplitude() / load.resistance, train);
    Ok(table.into_solution(OutputKind::InductorCurrent)?.with_load((*load).into()))
}

/// Steady-state capacitor (output) voltage of an L-RC load.
pub fn solve_lrc(load: &LrcLoad, train: &PwmTrain) -> Result<PiecewiseExpSolution> {
    let roots = root_finder::roots_lrc(load)?;
    let table = CoefficientTable::new(roots.as_slice(), train.amplitude(), train);
    Ok(table.into_solution(OutputKind::CapacitorVoltage)?.with_load((*load).into()))
}

/// Steady-state load current `i_1` of an L-C-LR load.
pub fn solve_lclr(load: &LclrLoad, train: &PwmTrain) -> Result<PiecewiseExpSolution> {
    let roots = root_finder::roots_lclr(load)?;
    let table = CoefficientTable::new(roots.as_slice(), train.amplitude() / load.resistance, train);
    Ok(table.into_solution(OutputKind::LoadCurrent)?.with_load((*load).into()))
}

/// Solves for the designated output of any load: `i` for LR, `v_C` for
/// L-RC, `i_1` for L-C-LR.
pub fn solve(load: &LoadCircuit, train: &PwmTrain) -> Result<PiecewiseExpSolution> {
    match load {
        LoadCircuit::Lr(l) => solve_lr(l, train),
        LoadCircuit::Lrc(l) => solve_lrc(l, train),
        LoadCircuit::Lclr(l) => solve_lclr(l, train),
    }
}
