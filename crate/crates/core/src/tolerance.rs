//! Numerical thresholds.
//!
//! All thresholds are relative: a quantity is compared against the largest
//! magnitude among the terms that were summed to produce it.

use serde::{Deserialize, Serialize};

/// A coefficient or residual below this (relative) counts as zero.
pub const VANISH: f64 = 1e-10;

/// Distance to the nearest integer below which a real number counts as an
/// integer (resonances, invariant-subspace conditions).
pub const INTEGRALITY: f64 = 1e-8;

/// Characteristic-equation residual accepted for a caller-supplied exponent.
pub const EXPONENT_MATCH: f64 = 1e-8;

/// Residual certificate required of an eigenpair.
pub const EIGEN_RESIDUAL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub vanish: f64,
    pub integrality: f64,
    pub exponent_match: f64,
    pub eigen_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            vanish: VANISH,
            integrality: INTEGRALITY,
            exponent_match: EXPONENT_MATCH,
            eigen_residual: EIGEN_RESIDUAL,
        }
    }
}

impl Tolerances {
    /// Returns the nearest integer if `x` is within `integrality` of it.
    pub fn as_integer(&self, x: f64) -> Option<i64> {
        let r = x.round();
        if (x - r).abs() < self.integrality {
            Some(r as i64)
        } else {
            None
        }
    }
}
