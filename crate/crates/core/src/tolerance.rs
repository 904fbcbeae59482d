use serde::{Deserialize, Serialize};

/// Comparison thresholds for floating-point equality and unitarity checks.
///
/// Matrix comparisons use the max-norm of the difference against `abs_eps`;
/// scalar comparisons additionally allow `rel_eps` times the magnitude of the
/// reference value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_eps: f64,
}

impl Tolerance {
    pub const DEFAULT_ABS: f64 = 1e-10;
    pub const DEFAULT_REL: f64 = 1e-12;

    /// Returns `None` if either threshold is negative or not finite.
    pub fn new(abs_eps: f64, rel_eps: f64) -> Option<Self> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        (ok(abs_eps) && ok(rel_eps)).then_some(Self { abs_eps, rel_eps })
    }

    /// Default relative threshold with the given absolute one.
    pub fn with_abs(abs_eps: f64) -> Option<Self> {
        Self::new(abs_eps, Self::DEFAULT_REL)
    }

    /// `|actual - expected| <= abs_eps + rel_eps * |expected|`
    pub fn scalar_close(&self, actual: f64, expected: f64) -> bool {
        (actual - expected).abs() <= self.abs_eps + self.rel_eps * expected.abs()
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_eps: Self::DEFAULT_ABS,
            rel_eps: Self::DEFAULT_REL,
        }
    }
}
