use serde::{Deserialize, Serialize};

use crate::special::EvalAccuracy;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    CompositeSimpson,
    GaussKronrod15,
}

/// Panel layout, refinement limits and absolute tolerance shared by every integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub base_panels: usize,
    pub max_depth: usize,
    pub abs_tol: f64,
    pub rule: Rule,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            base_panels: 4,
            max_depth: 30,
            abs_tol: 1e-9,
            rule: Rule::GaussKronrod15,
        }
    }
}

impl QuadratureConfig {
    pub fn new(base_panels: usize, max_depth: usize, abs_tol: f64, rule: Rule) -> Result<Self> {
        let cfg = Self {
            base_panels,
            max_depth,
            abs_tol,
            rule,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.rule = rule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::invalid(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.base_panels < 4 {
            return Err(Error::invalid(format!(
                "base_panels must be at least 4, got {}",
                self.base_panels
            )));
        }
        if self.max_depth < 1 {
            return Err(Error::invalid("max_depth must be at least 1"));
        }
        Ok(())
    }

    /// Panel count for a window of `length` at height `height`: one panel per
    /// `1 / log(2 + height)`, so each panel spans about half a radian of the
    /// phase `θ`, and never fewer than `base_panels`.
    pub fn panels_for(&self, length: f64, height: f64) -> usize {
        let by_phase = (length * (2.0 + height.abs()).ln()).ceil();
        let by_phase = if by_phase.is_finite() { by_phase as usize } else { 0 };
        self.base_panels.max(by_phase)
    }

    /// Copy with `base_panels` replaced by [`Self::panels_for`].
    pub fn for_window(&self, length: f64, height: f64) -> Self {
        Self {
            base_panels: self.panels_for(length, height),
            ..*self
        }
    }

    /// Pointwise zeta accuracy that keeps the integrated error over `length`
    /// well inside `abs_tol`.
    pub fn zeta_accuracy(&self, length: f64, height: f64) -> EvalAccuracy {
        let base = EvalAccuracy::for_height(height);
        let wanted = (0.1 * self.abs_tol / length.max(1.0)).max(1e-13);
        base.with_tol(base.abs_tol.min(wanted))
    }
}
