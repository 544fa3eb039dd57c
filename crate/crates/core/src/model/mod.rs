//! Data model: PWM excitation, load circuits, characteristic roots and
//! piecewise-exponential steady-state waveforms.

mod load;
mod roots;
mod solution;
mod train;

pub use load::{LclrLoad, LoadCircuit, LrLoad, LrcLoad, StateVector};
pub(crate) use roots::min_relative_separation;
pub use roots::{RootSet, REPEATED_ROOT_THRESHOLD};
pub use solution::{OutputKind, PiecewiseExpSolution, IMAGINARY_RESIDUE_TOLERANCE};
pub use train::{PwmTrain, MERGE_TOLERANCE};
