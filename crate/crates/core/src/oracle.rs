//! Independent steady-state reference: classical RK4 on the circuit state
//! equations, started from rest and run period after period until the
//! trajectory stops changing.
//!
//! Nothing here touches the characteristic roots or the closed-form
//! coefficients. Steps are split at every switching instant so the source is
//! constant within each step.

use crate::error::{Error, Result};
use crate::model::{LoadCircuit, OutputKind, PiecewiseExpSolution, PwmTrain, StateVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub steps_per_period: usize,
    pub max_periods: usize,
    /// Relative period-to-period change that counts as settled.
    pub settle_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { steps_per_period: 1 << 16, max_periods: 400, settle_tol: 1e-10 }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps_per_period < 1 << 10 {
            return Err(Error::InvalidParameter { name: "steps_per_period", value: self.steps_per_period as f64 });
        }
        if self.max_periods == 0 {
            return Err(Error::InvalidParameter { name: "max_periods", value: 0.0 });
        }
        if !(self.settle_tol.is_finite() && self.settle_tol > 0.0) {
            return Err(Error::InvalidParameter { name: "settle_tol", value: self.settle_tol });
        }
        Ok(())
    }
}

/// State layout `[i, i_1, v_C]`; variables a circuit lacks stay zero.
type State = [f64; 3];

const I: usize = 0;
const I1: usize = 1;
const VC: usize = 2;

fn active(load: &LoadCircuit) -> &'static [usize] {
    match load {
        LoadCircuit::Lr(_) => &[I],
        LoadCircuit::Lrc(_) => &[I, VC],
        LoadCircuit::Lclr(_) => &[I, I1, VC],
    }
}

fn rhs(load: &LoadCircuit, vs: f64, x: &State) -> State {
    match load {
        LoadCircuit::Lr(l) => [(vs - l.resistance * x[I]) / l.inductance, 0.0, 0.0],
        LoadCircuit::Lrc(l) => [(vs - x[VC]) / l.inductance, 0.0, (x[I] - x[VC] / l.resistance) / l.capacitance],
        LoadCircuit::Lclr(l) => [
            (vs - x[VC]) / l.inductance,
            (x[VC] - l.resistance * x[I1]) / l.load_inductance,
            (x[I] - x[I1]) / l.capacitance,
        ],
    }
}

fn axpy(x: &State, h: f64, k: &State) -> State {
    [x[0] + h * k[0], x[1] + h * k[1], x[2] + h * k[2]]
}

fn rk4_step(load: &LoadCircuit, vs: f64, x: &State, h: f64) -> State {
    let k1 = rhs(load, vs, x);
    let k2 = rhs(load, vs, &axpy(x, h / 2.0, &k1));
    let k3 = rhs(load, vs, &axpy(x, h / 2.0, &k2));
    let k4 = rhs(load, vs, &axpy(x, h, &k3));
    let mut out = *x;
    for c in 0..3 {
        out[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }
    out
}

/// Step boundaries over `[0, T]`: a uniform grid of `steps` steps merged with
/// every switching instant of both half periods.
pub fn step_nodes(train: &PwmTrain, steps: usize) -> Vec<f64> {
    let period = train.period();
    let half = train.half_period();
    let mut nodes: Vec<f64> = (0..=steps).map(|j| period * j as f64 / steps as f64).collect();
    nodes.extend(train.instants().iter().copied());
    nodes.push(half);
    nodes.extend(train.instants().iter().map(|t| t + half));
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes
}

/// One settled period of the RK4 solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    load: LoadCircuit,
    times: Vec<f64>,
    states: Vec<State>,
    periods: usize,
    deviation: f64,
}

impl Trajectory {
    /// Sample times in `[0, T)`.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, index: usize) -> StateVector {
        let x = &self.states[index];
        let has = |c: usize| active(&self.load).contains(&c);
        StateVector { i: has(I).then_some(x[I]), i_1: has(I1).then_some(x[I1]), v_c: has(VC).then_some(x[VC]) }
    }

    /// Periods integrated before settling.
    pub fn periods(&self) -> usize {
        self.periods
    }

    /// Final period-to-period relative change.
    pub fn settle_deviation(&self) -> f64 {
        self.deviation
    }

    fn component(&self, kind: OutputKind) -> Result<usize> {
        let index = match kind {
            OutputKind::InductorCurrent => I,
            OutputKind::LoadCurrent => I1,
            OutputKind::CapacitorVoltage => VC,
            OutputKind::SourceVoltage => return Err(Error::MismatchedOutputKind(kind.symbol())),
        };
        if active(&self.load).contains(&index) {
            Ok(index)
        } else {
            Err(Error::MismatchedOutputKind(kind.symbol()))
        }
    }

    /// Samples of the variable an output kind refers to.
    pub fn output(&self, kind: OutputKind) -> Result<Vec<f64>> {
        let c = self.component(kind)?;
        Ok(self.states.iter().map(|x| x[c]).collect())
    }
}

fn relative_change(load: &LoadCircuit, current: &[State], previous: &[State]) -> f64 {
    let mut worst: f64 = 0.0;
    for &c in active(load) {
        let peak = current.iter().map(|x| x[c].abs()).fold(0.0, f64::max);
        let diff = current.iter().zip(previous).map(|(a, b)| (a[c] - b[c]).abs()).fold(0.0, f64::max);
        let rel = if peak > 0.0 { diff / peak } else { diff };
        worst = worst.max(rel);
    }
    worst
}

/// Integrates from the zero state until one period differs from the previous
/// by less than `cfg.settle_tol`, and returns that period.
pub fn integrate(load: &LoadCircuit, train: &PwmTrain, cfg: &OracleConfig) -> Result<Trajectory> {
    load.validate()?;
    cfg.validate()?;
    let nodes = step_nodes(train, cfg.steps_per_period);
    let sources: Vec<f64> = nodes.windows(2).map(|w| train.source_at(0.5 * (w[0] + w[1]))).collect();

    let samples = nodes.len() - 1;
    let mut previous: Vec<State> = Vec::new();
    let mut current: Vec<State> = Vec::with_capacity(samples);
    let mut x: State = [0.0; 3];
    let mut deviation = f64::INFINITY;

    for period in 1..=cfg.max_periods {
        current.clear();
        for (w, &vs) in nodes.windows(2).zip(&sources) {
            current.push(x);
            x = rk4_step(load, vs, &x, w[1] - w[0]);
        }
        if !previous.is_empty() {
            deviation = relative_change(load, &current, &previous);
            if deviation < cfg.settle_tol {
                return Ok(Trajectory {
                    load: *load,
                    times: nodes[..samples].to_vec(),
                    states: current,
                    periods: period,
                    deviation,
                });
            }
        }
        if x.iter().any(|v| !v.is_finite()) {
            break;
        }
        std::mem::swap(&mut previous, &mut current);
    }
    Err(Error::NotSettled { periods: cfg.max_periods, deviation })
}

/// `max |x_closed(t) - x_rk4(t)| / max |x_rk4|` over the trajectory samples.
pub fn compare(sol: &PiecewiseExpSolution, trajectory: &Trajectory) -> Result<f64> {
    let reference = trajectory.output(sol.kind())?;
    let peak = reference.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for (&t, &r) in trajectory.times().iter().zip(&reference) {
        worst = worst.max((sol.evaluate(t)? - r).abs());
    }
    Ok(if peak > 0.0 { worst / peak } else { worst })
}
