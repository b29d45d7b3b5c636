use serde::{Deserialize, Serialize};

/// Numerical thresholds used by verification and construction routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Axiom checks: unitarity, POVM normalization, covariance.
    pub verify: f64,
    /// Internal consistency of constructed objects (isometry blocks, normalized states).
    pub construct: f64,
    /// Atom products in the projectivity test.
    pub projective: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { verify: 1e-9, construct: 1e-10, projective: 1e-8 }
    }
}

impl Tolerances {
    /// Same threshold everywhere.
    pub fn uniform(tol: f64) -> Self {
        Self { verify: tol, construct: tol, projective: tol }
    }
}

/// Deviation from an integer above which a character inner product signals a broken catalog.
pub const MULTIPLICITY_ROUNDING: f64 = 1e-6;

/// Character comparison threshold for equivalence of representations.
pub const CHARACTER_EQUALITY: f64 = 1e-9;
