//! Characteristic roots of the three load circuits.
//!
//! The L-RC quadratic and the L-C-LR cubic are solved in closed form and then
//! polished with Newton steps. Complex roots are produced as one computed
//! root plus its exact conjugate, so conjugate pairs are bit-identical.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{LclrLoad, LoadCircuit, LrLoad, LrcLoad, RootSet, REPEATED_ROOT_THRESHOLD};

const NEWTON_STEPS: usize = 2;

/// Monic characteristic polynomial coefficients, highest degree first
/// (leading `1.0` included).
pub fn characteristic_coefficients(load: &LoadCircuit) -> Vec<f64> {
    match load {
        LoadCircuit::Lr(l) => vec![1.0, l.resistance / l.inductance],
        LoadCircuit::Lrc(l) => vec![1.0, 1.0 / (l.resistance * l.capacitance), 1.0 / (l.inductance * l.capacitance)],
        LoadCircuit::Lclr(l) => {
            let (a2, a1, a0) = lclr_coefficients(l);
            vec![1.0, a2, a1, a0]
        }
    }
}

fn lclr_coefficients(load: &LclrLoad) -> (f64, f64, f64) {
    let a2 = load.resistance / load.load_inductance;
    let a1 = (1.0 / load.inductance + 1.0 / load.load_inductance) / load.capacitance;
    let a0 = load.resistance / (load.inductance * load.load_inductance * load.capacitance);
    (a2, a1, a0)
}

pub fn roots(load: &LoadCircuit) -> Result<RootSet> {
    match load {
        LoadCircuit::Lr(l) => roots_lr(l),
        LoadCircuit::Lrc(l) => roots_lrc(l),
        LoadCircuit::Lclr(l) => roots_lclr(l),
    }
}

/// Single real root `-R/L`.
pub fn roots_lr(load: &LrLoad) -> Result<RootSet> {
    load.validate()?;
    RootSet::new(vec![Complex64::new(-load.resistance / load.inductance, 0.0)])
}

/// Roots of `LC s^2 + (L/R) s + 1 = 0`.
pub fn roots_lrc(load: &LrcLoad) -> Result<RootSet> {
    load.validate()?;
    let b = 1.0 / (load.resistance * load.capacitance);
    let c = 1.0 / (load.inductance * load.capacitance);
    let p = |s: Complex64| s * s + s * b + c;
    let dp = |s: Complex64| s * 2.0 + b;

    let disc = b * b - 4.0 * c;
    let roots = if disc >= 0.0 {
        // larger-magnitude root first, the other from the product s1 * s2 = c
        let big = -0.5 * (b + disc.sqrt());
        let small = c / big;
        ensure_separated(&[Complex64::new(big, 0.0), Complex64::new(small, 0.0)])?;
        vec![Complex64::new(polish_real(big, p, dp), 0.0), Complex64::new(polish_real(small, p, dp), 0.0)]
    } else {
        let s = Complex64::new(-0.5 * b, 0.5 * (-disc).sqrt());
        ensure_separated(&[s, s.conj()])?;
        let s = polish(s, p, dp);
        vec![s, s.conj()]
    };
    RootSet::new(roots)
}

/// Roots of `s^3 + (R/L1) s^2 + (1/C)(1/L + 1/L1) s + R/(L L1 C) = 0`.
///
/// Solved for `u = s / sigma` with `sigma` the cube root of the constant
/// term, which makes the scaled cubic `u^3 + A u^2 + B u + 1` well ranged.
pub fn roots_lclr(load: &LclrLoad) -> Result<RootSet> {
    load.validate()?;
    let (a2, a1, a0) = lclr_coefficients(load);
    let sigma = a0.cbrt();
    let a = a2 / sigma;
    let b = a1 / (sigma * sigma);
    let p = |u: Complex64| ((u + a) * u + b) * u + 1.0;
    let dp = |u: Complex64| (u * 3.0 + 2.0 * a) * u + b;

    // depressed cubic y^3 + pp y + qq = 0 with u = y - a/3
    let shift = a / 3.0;
    let pp = b - a * a / 3.0;
    let qq = 2.0 * a * a * a / 27.0 - a * b / 3.0 + 1.0;
    let disc = (qq / 2.0).powi(2) + (pp / 3.0).powi(3);

    let scaled: Vec<Complex64> = if disc > 0.0 {
        let t = -qq / 2.0 - qq.signum() * disc.sqrt();
        let cr = t.cbrt();
        let y = if cr == 0.0 { 0.0 } else { cr - pp / (3.0 * cr) };
        let real = polish_real(y - shift, p, dp);

        // deflate: (u - r)(u^2 + beta u + gamma), gamma from the constant term
        let beta = a + real;
        let gamma = -1.0 / real;
        let qdisc = beta * beta - 4.0 * gamma;
        if qdisc < 0.0 {
            let z = Complex64::new(-0.5 * beta, 0.5 * (-qdisc).sqrt());
            ensure_separated(&[Complex64::new(real, 0.0), z, z.conj()])?;
            let z = polish(z, p, dp);
            vec![Complex64::new(real, 0.0), z, z.conj()]
        } else {
            let big = -0.5 * (beta + beta.signum() * qdisc.sqrt());
            let small = gamma / big;
            let candidates = [real, big, small].map(|x| Complex64::new(x, 0.0));
            ensure_separated(&candidates)?;
            vec![
                Complex64::new(real, 0.0),
                Complex64::new(polish_real(big, p, dp), 0.0),
                Complex64::new(polish_real(small, p, dp), 0.0),
            ]
        }
    } else {
        if pp >= 0.0 {
            return Err(Error::RepeatedRoots { separation: 0.0 });
        }
        let m = 2.0 * (-pp / 3.0).sqrt();
        let arg = (3.0 * qq / (2.0 * pp) * (-3.0 / pp).sqrt()).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let candidates: Vec<Complex64> =
            (0..3).map(|k| Complex64::new(m * (theta - 2.0 * PI * k as f64 / 3.0).cos() - shift, 0.0)).collect();
        ensure_separated(&candidates)?;
        candidates.into_iter().map(|u| Complex64::new(polish_real(u.re, p, dp), 0.0)).collect()
    };

    RootSet::new(scaled.into_iter().map(|u| u * sigma).collect())
}

fn ensure_separated(roots: &[Complex64]) -> Result<()> {
    let separation = crate::model::min_relative_separation(roots);
    if separation < REPEATED_ROOT_THRESHOLD || separation.is_nan() {
        return Err(Error::RepeatedRoots { separation });
    }
    Ok(())
}

fn polish<P, D>(mut s: Complex64, p: P, dp: D) -> Complex64
where
    P: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    for _ in 0..NEWTON_STEPS {
        let slope = dp(s);
        if slope == Complex64::new(0.0, 0.0) {
            break;
        }
        let next = s - p(s) / slope;
        if !(next.re.is_finite() && next.im.is_finite()) || p(next).norm() > p(s).norm() {
            break;
        }
        s = next;
    }
    s
}

fn polish_real<P, D>(x: f64, p: P, dp: D) -> f64
where
    P: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    polish(Complex64::new(x, 0.0), p, dp).re
}
