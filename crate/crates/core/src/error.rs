use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("switching instants are not increasing at index {index}")]
    NonMonotonicInstants { index: usize },

    #[error("switching instant count {count} is odd")]
    OddInstantCount { count: usize },

    #[error("switching instant {value} at index {index} lies outside (0, T/2)")]
    InstantOutOfRange { index: usize, value: f64 },

    #[error("characteristic roots are repeated (relative separation {separation:.3e})")]
    RepeatedRoots { separation: f64 },

    #[error("characteristic root {re}{im:+}i is not strictly stable")]
    UnstableRoot { re: f64, im: f64 },

    #[error("complex roots are not closed under conjugation")]
    UnpairedComplexRoot,

    #[error("expected 1 to 3 roots, got {0}")]
    RootCount(usize),

    #[error("exponential factor overflows f64 (root {re}{im:+}i, t = {t})")]
    OverflowGuard { re: f64, im: f64, t: f64 },

    #[error("imaginary residue {residue:.3e} at t = {t} exceeds tolerance")]
    ImaginaryResidueExceeded { t: f64, residue: f64 },

    #[error("malformed solution: {0}")]
    MalformedSolution(String),

    #[error("harmonic count must be positive")]
    InvalidHarmonicCount,

    #[error("fundamental component is zero")]
    ZeroFundamental,

    #[error("oracle did not reach steady state after {periods} periods (deviation {deviation:.3e})")]
    NotSettled { periods: usize, deviation: f64 },

    #[error("trajectory does not carry the {0} state variable")]
    MismatchedOutputKind(&'static str),
}
