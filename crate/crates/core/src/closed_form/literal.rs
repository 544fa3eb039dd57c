//! Unanchored coefficient formulas, evaluated exactly as written with
//! `exp(-s t_n)` factors and running alternating sums.
//!
//! These overflow once `|Re s| * T/2` approaches the `f64` exponent range,
//! which is why the production path in the parent module works with anchored
//! coefficients. They remain useful as an independent algebraic route.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{LclrLoad, LrLoad, LrcLoad, PwmTrain};
use crate::root_finder;

fn guarded_exp(s: Complex64, t: f64) -> Result<Complex64> {
    let value = (-s * t).exp();
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::OverflowGuard { re: s.re, im: s.im, t })
    }
}

/// `sums[k] = sum_{n=1}^{k} sign(n) exp(-s t_n)` for `k = 0..=2N`.
fn partial_sums(s: Complex64, instants: &[f64], sign: impl Fn(usize) -> f64) -> Result<Vec<Complex64>> {
    let mut sums = Vec::with_capacity(instants.len() + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    sums.push(acc);
    for (idx, &t) in instants.iter().enumerate() {
        acc += guarded_exp(s, t)? * sign(idx + 1);
        sums.push(acc);
    }
    Ok(sums)
}

fn alternating(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn check_finite(rows: &[Vec<Complex64>], s: Complex64, t: f64) -> Result<()> {
    if rows.iter().flatten().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::OverflowGuard { re: s.re, im: s.im, t })
    }
}

/// `A_k, B_k` for the L-RC capacitor voltage, rows `k = 1..=2N+1`, columns
/// in canonical root order. Column two is column one with the roots swapped.
pub fn lrc_coefficients(load: &LrcLoad, train: &PwmTrain) -> Result<Vec<Vec<Complex64>>> {
    let roots = root_finder::roots_lrc(load)?;
    let r = roots.as_slice();
    let v = train.amplitude();
    let half = train.half_period();
    let rows = train.instants().len() + 1;
    let mut table = vec![Vec::with_capacity(2); rows];
    for (s1, s2) in [(r[0], r[1]), (r[1], r[0])] {
        let sums = partial_sums(s1, train.instants(), alternating)?;
        let e_half = (s1 * half).exp();
        let first = v * s2 * e_half / ((s1 - s2) * (e_half + 1.0)) * sums[rows - 1];
        let step = s2 * v / (s1 - s2);
        for (k, row) in table.iter_mut().enumerate() {
            row.push(first - step * sums[k]);
        }
    }
    check_finite(&table, r[0], half)?;
    Ok(table)
}

/// `A_k, B_k, C_k` for the L-C-LR load current `i_1`. Column `m` uses root
/// `m` as `s_1` and the other two, cyclically, as `s_2, s_3`.
pub fn lclr_coefficients(load: &LclrLoad, train: &PwmTrain) -> Result<Vec<Vec<Complex64>>> {
    let roots = root_finder::roots_lclr(load)?;
    let r = roots.as_slice();
    let v = train.amplitude();
    let half = train.half_period();
    let rows = train.instants().len() + 1;
    let mut table = vec![Vec::with_capacity(3); rows];
    for m in 0..3 {
        let (s1, s2, s3) = (r[m], r[(m + 1) % 3], r[(m + 2) % 3]);
        let sums = partial_sums(s1, train.instants(), |n| -alternating(n))?;
        let step = v * s2 * s3 / (load.resistance * (s1 - s2) * (s1 - s3));
        let denom = guarded_exp(s1, half)? + 1.0;
        let first = step / denom * sums[rows - 1];
        for (k, row) in table.iter_mut().enumerate() {
            row.push(first - step * sums[k]);
        }
    }
    check_finite(&table, r[0], half)?;
    Ok(table)
}

/// `A_k` for the LR inductor current.
pub fn lr_coefficients(load: &LrLoad, train: &PwmTrain) -> Result<Vec<Vec<Complex64>>> {
    let roots = root_finder::roots_lr(load)?;
    let s = roots.as_slice()[0];
    let step = train.amplitude() / load.resistance;
    let half = train.half_period();
    let rows = train.instants().len() + 1;
    let sums = partial_sums(s, train.instants(), |n| -alternating(n))?;
    let first = step / (guarded_exp(s, half)? + 1.0) * sums[rows - 1];
    let table: Vec<Vec<Complex64>> = (0..rows).map(|k| vec![first - step * sums[k]]).collect();
    check_finite(&table, s, half)?;
    Ok(table)
}
