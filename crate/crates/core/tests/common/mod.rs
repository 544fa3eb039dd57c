#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use pwm_steady::model::{LclrLoad, LoadCircuit, LrLoad, LrcLoad, PiecewiseExpSolution, PwmTrain};
use pwm_steady::root_finder;
use pwm_steady::spwm::{self, SpwmSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const V_O: f64 = 100.0;
pub const FREQUENCY: f64 = 60.0;
pub const PULSES: usize = 11;

pub fn reference_lr() -> LoadCircuit {
    LrLoad::new(1.0, 300e-6).unwrap().into()
}

pub fn reference_lrc() -> LoadCircuit {
    LrcLoad::new(100e-6, 1.0, 50e-6).unwrap().into()
}

pub fn reference_lclr() -> LoadCircuit {
    LclrLoad::new(100e-6, 50e-6, 300e-6, 1.0).unwrap().into()
}

pub fn reference_loads() -> [LoadCircuit; 3] {
    [reference_lr(), reference_lrc(), reference_lclr()]
}

/// Target `(L, C, THD percent)` rows for the L-C-LR filter sweep.
pub const TABLE_ROWS: [(f64, f64, f64); 5] =
    [(50e-6, 5e-6, 1.54), (40e-6, 12e-6, 1.17), (30e-6, 20e-6, 1.03), (20e-6, 28e-6, 1.40), (10e-6, 35e-6, 1.83)];

pub fn reference_train(m: f64) -> PwmTrain {
    spwm::generate(&SpwmSpec::new(PULSES, m, FREQUENCY, V_O).unwrap()).unwrap()
}

/// Fourier coefficients `c_1..=c_n_max` by segment-aligned composite
/// trapezoid sampling of `sol.evaluate` over a full period, with one
/// Richardson step between `samples` and `samples / 2` points. Knows nothing
/// about the exponential form of the waveform.
pub fn sampled_fourier(sol: &PiecewiseExpSolution, n_max: usize, samples: usize) -> Vec<Complex64> {
    let fine = trapezoid_fourier(sol, n_max, samples);
    let coarse = trapezoid_fourier(sol, n_max, samples / 2);
    fine.iter().zip(&coarse).map(|(f, c)| (4.0 * f - c) / 3.0).collect()
}

fn segments(sol: &PiecewiseExpSolution) -> Vec<(f64, f64)> {
    let half = sol.period() / 2.0;
    let b = sol.breakpoints();
    let mut out = Vec::new();
    for shift in [0.0, half] {
        for w in b.windows(2) {
            if w[1] > w[0] {
                out.push((w[0] + shift, w[1] + shift));
            }
        }
    }
    out
}

fn trapezoid_fourier(sol: &PiecewiseExpSolution, n_max: usize, samples: usize) -> Vec<Complex64> {
    let period = sol.period();
    let omega = 2.0 * PI / period;
    let mut acc = vec![Complex64::new(0.0, 0.0); n_max];
    for (a, b) in segments(sol) {
        let pieces = ((samples as f64 * (b - a) / period).round() as usize).max(2);
        let h = (b - a) / pieces as f64;
        for j in 0..=pieces {
            let t = if j == pieces { b } else { a + h * j as f64 };
            // endpoint values from inside the segment
            let probe = if j == pieces { b - 1e-3 * h } else { t };
            let x = if j == pieces {
                let slope = sol.derivative(probe, 1).unwrap();
                sol.evaluate(probe).unwrap() + slope * (b - probe)
            } else {
                sol.evaluate(t).unwrap()
            };
            let weight = if j == 0 || j == pieces { 0.5 * h } else { h };
            for (n, slot) in acc.iter_mut().enumerate() {
                let phase = -((n + 1) as f64) * omega * t;
                *slot += Complex64::from_polar(x * weight, phase);
            }
        }
    }
    acc.into_iter().map(|c| c / period).collect()
}

/// Time-domain mean square by the same segment-aligned trapezoid/Richardson
/// scheme.
pub fn sampled_mean_square(sol: &PiecewiseExpSolution, samples: usize) -> f64 {
    let rule = |samples: usize| {
        let period = sol.period();
        let mut acc = 0.0;
        for (a, b) in segments(sol) {
            let pieces = ((samples as f64 * (b - a) / period).round() as usize).max(2);
            let h = (b - a) / pieces as f64;
            for j in 0..pieces {
                let t0 = a + h * j as f64;
                let x0 = sol.evaluate(t0).unwrap();
                let x1 = if j + 1 == pieces {
                    let probe = b - 1e-3 * h;
                    sol.evaluate(probe).unwrap() + sol.derivative(probe, 1).unwrap() * (b - probe)
                } else {
                    sol.evaluate(t0 + h).unwrap()
                };
                acc += 0.5 * h * (x0 * x0 + x1 * x1);
            }
        }
        acc / period
    };
    let fine = rule(samples);
    let coarse = rule(samples / 2);
    (4.0 * fine - coarse) / 3.0
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

pub fn random_train(rng: &mut ChaCha8Rng, period: f64) -> PwmTrain {
    let pulses = rng.gen_range(1..=15);
    let half = period / 2.0;
    loop {
        let mut instants: Vec<f64> = (0..2 * pulses).map(|_| rng.gen_range(0.0..half)).collect();
        instants.sort_by(f64::total_cmp);
        let min_gap = instants
            .windows(2)
            .map(|w| w[1] - w[0])
            .chain([instants[0], half - instants[instants.len() - 1]])
            .fold(f64::INFINITY, f64::min);
        if min_gap > 1e-6 * period {
            let amplitude = log_uniform(rng, 1.0, 400.0);
            return PwmTrain::new(amplitude, period, instants).unwrap();
        }
    }
}

/// Every element value log-uniform over `[1e-6, 1]` in SI units.
fn random_load(rng: &mut ChaCha8Rng, kind: usize) -> LoadCircuit {
    let mut value = || log_uniform(rng, 1e-6, 1.0);
    let (r, l, c, l1) = (value(), value(), value(), value());
    match kind {
        0 => LrLoad::new(r, l).unwrap().into(),
        1 => LrcLoad::new(l, r, c).unwrap().into(),
        _ => LclrLoad::new(l, c, l1, r).unwrap().into(),
    }
}

/// A random case plus the RK4 steps per period that resolve it.
pub struct OracleCase {
    pub load: LoadCircuit,
    pub train: PwmTrain,
    pub steps: usize,
}

/// Rough RK4 relative error for root `s` at step `h`: the per-step error
/// `(|s| h)^5 / 120` accumulated over the mode's lifetime `1 / (|Re s| h)`
/// steps. Pessimistic, since modes are rarely excited at full amplitude.
fn rk4_error_estimate(s: Complex64, h: f64) -> f64 {
    (s.norm() * h).powi(4) * s.norm() / (120.0 * -s.re)
}

/// Random load of the given kind (0 = LR, 1 = L-RC, 2 = L-C-LR) and train,
/// restricted to cases the RK4 reference can settle and resolve: every mode
/// decays by at least `e^-0.25` per period, the roots are not nearly
/// repeated, and some step count in `2^16..=2^19` keeps `|s| h <= 0.25` and
/// the accumulated error estimate below `1e-3` for every root.
pub fn random_oracle_case(rng: &mut ChaCha8Rng, kind: usize, period: f64) -> OracleCase {
    loop {
        let load = random_load(rng, kind);
        let Ok(roots) = root_finder::roots(&load) else { continue };
        let slowest = roots.as_slice().iter().map(|s| -s.re).fold(f64::INFINITY, f64::min);
        if slowest * period < 0.25 || roots.min_relative_separation() <= 1e-6 {
            continue;
        }
        let resolves = |steps: usize| {
            let h = period / steps as f64;
            roots.as_slice().iter().all(|&s| s.norm() * h <= 0.25 && rk4_error_estimate(s, h) <= 1e-3)
        };
        if let Some(steps) = (16..=19).map(|k| 1usize << k).find(|&steps| resolves(steps)) {
            return OracleCase { load, train: random_train(rng, period), steps };
        }
    }
}

pub fn order(load: &LoadCircuit) -> u32 {
    match load {
        LoadCircuit::Lr(_) => 1,
        LoadCircuit::Lrc(_) => 2,
        LoadCircuit::Lclr(_) => 3,
    }
}

/// Largest jump of derivatives `0..order` across switching instants and the
/// half-period boundary. Each derivative is scaled by the largest one-sided
/// limit or summed exponential-term magnitude seen for it, so fully decayed
/// waveforms are judged against the size of the terms that cancelled.
pub fn worst_discontinuity(sol: &PiecewiseExpSolution, order: u32) -> f64 {
    let instants = sol.breakpoints().len() - 2;
    let mut worst: f64 = 0.0;
    for d in 0..order {
        let mut jump: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for k in 1..=instants {
            let (left, right) = sol.limits_at_instant(k, d);
            jump = jump.max((left - right).abs());
            scale = scale.max(left.abs()).max(right.abs());
        }
        for k in 0..sol.interval_count() {
            let terms: f64 =
                sol.anchored_row(k).iter().zip(sol.exponents()).map(|(a, s)| a.norm() * s.norm().powi(d as i32)).sum();
            scale = scale.max(terms);
        }
        let (start, end) = sol.boundary_limits(d);
        jump = jump.max((start + end).abs());
        scale = scale.max(start.abs()).max(end.abs());
        if scale > 0.0 {
            worst = worst.max(jump / scale);
        }
    }
    worst
}

/// Largest relative mismatch between the monic characteristic coefficients
/// and the expanded product of the computed roots.
pub fn vieta_residual(load: &LoadCircuit) -> f64 {
    let coeffs = root_finder::characteristic_coefficients(load);
    let roots = root_finder::roots(load).unwrap();
    let r = roots.as_slice();
    // expand prod (s - r) and compare with the monic coefficients
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for &root in r {
        let mut next = e.clone();
        next.push(Complex64::new(0.0, 0.0));
        for k in 1..next.len() {
            next[k] -= root * e[k - 1];
        }
        e = next;
    }
    e.iter().zip(&coeffs).skip(1).map(|(got, &want)| (got - want).norm() / want.abs()).fold(0.0, f64::max)
}
