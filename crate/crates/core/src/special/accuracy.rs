use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest `|Im s|` accepted. Beyond it the double precision phase of `θ(t)`
/// loses more than `1e-6`.
pub const MAX_HEIGHT: f64 = 1e7;

/// Absolute error target and series-length cap for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalAccuracy {
    pub abs_tol: f64,
    pub max_terms: usize,
    /// Allow the Riemann–Siegel main sum on `σ = 1/2` when its error bound is
    /// below `abs_tol`.
    pub critical_line_fast_path: bool,
}

impl EvalAccuracy {
    pub const DEFAULT_MAX_TERMS: usize = 10_000_000;

    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        let acc = Self {
            abs_tol,
            max_terms,
            critical_line_fast_path: true,
        };
        acc.validate()?;
        Ok(acc)
    }

    /// Default accuracy at height `t`: `1e-10` up to `|t| = 1e4`, `1e-8` above.
    pub fn for_height(t: f64) -> Self {
        let abs_tol = if t.abs() <= 1e4 { 1e-10 } else { 1e-8 };
        Self {
            abs_tol,
            max_terms: Self::DEFAULT_MAX_TERMS,
            critical_line_fast_path: true,
        }
    }

    pub fn with_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn without_fast_path(mut self) -> Self {
        self.critical_line_fast_path = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::invalid(format!(
                "abs_tol must be positive and finite, got {}",
                self.abs_tol
            )));
        }
        if self.max_terms < 16 {
            return Err(Error::invalid(format!(
                "max_terms must be at least 16, got {}",
                self.max_terms
            )));
        }
        Ok(())
    }
}

impl Default for EvalAccuracy {
    fn default() -> Self {
        Self::for_height(0.0)
    }
}

/// Rough size of the double precision rounding noise in `ζ(σ + it)`.
///
/// Each Dirichlet term carries a phase `t log n` rounded to about
/// `ε t log n`; summed over `N ≈ t/2π` terms of size `n^{-σ}` this gives
/// `ε t log N (Σ n^{-2σ})^{1/2}`. For `σ < 0` the reflection factor
/// `(t/2π)^{1/2-σ}` multiplies the noise of `ζ(1-s)`.
pub fn zeta_rounding_noise(sigma: f64, t: f64) -> f64 {
    let t = t.abs().max(1.0);
    let (s, scale) = if sigma < 0.0 {
        (
            1.0 - sigma,
            (t / (2.0 * std::f64::consts::PI)).max(1.0).powf(0.5 - sigma),
        )
    } else {
        (sigma, 1.0)
    };
    let n = t / (2.0 * std::f64::consts::PI) + 2.0;
    let e = 2.0 * s;
    let squares = if (e - 1.0).abs() < 1e-6 {
        n.ln() + 1.0
    } else if e > 1.0 {
        1.0 / (e - 1.0) + 1.0
    } else {
        n.powf(1.0 - e) / (1.0 - e) + 1.0
    };
    4.0 * f64::EPSILON * t * n.ln() * squares.sqrt() * scale
}

/// Rough size of the rounding noise in `θ(t)`, whose magnitude is about `(t/2) log t`.
pub fn theta_rounding_noise(t: f64) -> f64 {
    let t = t.abs().max(1.0);
    4.0 * f64::EPSILON * t * (2.0 + t).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_settings() {
        assert!(EvalAccuracy::new(0.0, 100).is_err());
        assert!(EvalAccuracy::new(-1.0, 100).is_err());
        assert!(EvalAccuracy::new(1e-10, 15).is_err());
        assert!(EvalAccuracy::new(1e-10, 16).is_ok());
    }

    #[test]
    fn default_tolerance_depends_on_height() {
        assert_eq!(EvalAccuracy::for_height(1e4).abs_tol, 1e-10);
        assert_eq!(EvalAccuracy::for_height(1.5e4).abs_tol, 1e-8);
    }
}
