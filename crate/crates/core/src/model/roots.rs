use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative separation below which two roots count as repeated.
pub const REPEATED_ROOT_THRESHOLD: f64 = 1e-9;

/// Distinct, strictly stable characteristic roots in canonical order
/// (ascending real part, then imaginary part).
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    roots: Vec<Complex64>,
}

impl RootSet {
    pub fn new(mut roots: Vec<Complex64>) -> Result<Self> {
        if roots.is_empty() || roots.len() > 3 {
            return Err(Error::RootCount(roots.len()));
        }
        for s in &roots {
            if !(s.re.is_finite() && s.im.is_finite() && s.re < 0.0) {
                return Err(Error::UnstableRoot { re: s.re, im: s.im });
            }
        }
        for s in &roots {
            if s.im != 0.0 && !roots.iter().any(|r| *r == s.conj()) {
                return Err(Error::UnpairedComplexRoot);
            }
        }
        let separation = min_relative_separation(&roots);
        if separation < REPEATED_ROOT_THRESHOLD {
            return Err(Error::RepeatedRoots { separation });
        }
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Ok(Self { roots })
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Smallest `|s_i - s_j| / max(|s_i|, |s_j|)` over all pairs; infinite
    /// for a single root.
    pub fn min_relative_separation(&self) -> f64 {
        min_relative_separation(&self.roots)
    }

    /// Index of the conjugate partner of root `m`, if it is non-real.
    pub fn conjugate_partner(&self, m: usize) -> Option<usize> {
        let s = self.roots[m];
        if s.im == 0.0 {
            return None;
        }
        self.roots.iter().position(|r| *r == s.conj())
    }
}

pub(crate) fn min_relative_separation(roots: &[Complex64]) -> f64 {
    let mut min = f64::INFINITY;
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            let scale = a.norm().max(b.norm());
            let sep = if scale == 0.0 { 0.0 } else { (a - b).norm() / scale };
            min = min.min(sep);
        }
    }
    min
}
