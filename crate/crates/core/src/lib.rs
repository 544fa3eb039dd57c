//! Exact periodic steady state of single-phase PWM inverters driving LR,
//! L-RC and L-C-LR loads.
//!
//! On every interval between switching instants the steady-state output is a
//! sum of exponentials of the characteristic roots plus a constant. The
//! coefficients follow from decoupled two-diagonal recurrences closed by the
//! half-wave anti-periodic boundary condition ([`closed_form`]). Fourier
//! coefficients, THD and ripple are integrated analytically ([`spectral`]),
//! and an RK4 time-stepping reference ([`oracle`]) provides an independent
//! check.
//!
//! ```
//! use pwm_steady::{closed_form, spectral, spwm};
//! use pwm_steady::model::LclrLoad;
//!
//! let train = spwm::generate(&spwm::SpwmSpec::new(11, 0.9, 60.0, 100.0)?)?;
//! let load = LclrLoad::new(30e-6, 20e-6, 300e-6, 1.0)?;
//! let current = closed_form::solve_lclr(&load, &train)?;
//! let thd = spectral::thd(&spectral::spectrum(&current, 200)?)?;
//! assert!(thd.is_finite() && thd > 0.0);
//! # Ok::<(), pwm_steady::Error>(())
//! ```

pub mod cli;
pub mod closed_form;
mod error;
pub mod io;
pub mod model;
pub mod oracle;
pub mod root_finder;
pub mod spectral;
pub mod spwm;

pub use error::{Error, Result};
