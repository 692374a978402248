use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    Uniform,
    PhaseLocked,
}

impl std::str::FromStr for Sampling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Sampling::Uniform),
            "phase-locked" | "phase_locked" | "phaselocked" => Ok(Sampling::PhaseLocked),
            other => Err(Error::invalid(format!(
                "unknown sampling '{other}' (expected uniform or phase-locked)"
            ))),
        }
    }
}

/// Shifts `T_min, T_min + spacing, ...` up to `T_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftGrid {
    #[serde(rename = "T_min")]
    pub t_min: f64,
    #[serde(rename = "T_max")]
    pub t_max: f64,
    pub spacing: f64,
    pub sampling: Sampling,
}

/// Spacing that resolves one oscillation of `θ` at height `t_max`.
pub fn phase_locked_spacing(t_max: f64) -> f64 {
    PI / (t_max / (2.0 * PI)).ln()
}

impl ShiftGrid {
    pub fn new(t_min: f64, t_max: f64, spacing: f64, sampling: Sampling) -> Result<Self> {
        let grid = Self {
            t_min,
            t_max,
            spacing,
            sampling,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn uniform(t_min: f64, t_max: f64, spacing: f64) -> Result<Self> {
        Self::new(t_min, t_max, spacing, Sampling::Uniform)
    }

    /// Phase-locked grid at the largest admissible spacing.
    pub fn phase_locked(t_min: f64, t_max: f64) -> Result<Self> {
        if t_max <= 2.0 * PI * std::f64::consts::E {
            return Err(Error::invalid(format!(
                "phase-locked grids need T_max > 2πe, got {t_max}"
            )));
        }
        Self::new(t_min, t_max, phase_locked_spacing(t_max), Sampling::PhaseLocked)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min.is_finite() && self.t_max.is_finite() && self.t_min <= self.t_max) {
            return Err(Error::invalid(format!(
                "shift grid needs finite T_min <= T_max, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return Err(Error::invalid(format!(
                "grid spacing must be positive, got {}",
                self.spacing
            )));
        }
        if self.sampling == Sampling::PhaseLocked {
            let limit = phase_locked_spacing(self.t_max);
            if self.t_max <= 2.0 * PI || self.t_max.is_nan() || self.spacing > limit {
                return Err(Error::invalid(format!(
                    "phase-locked spacing {} exceeds π/log(T_max/2π) = {limit}",
                    self.spacing
                )));
            }
        }
        if self.len() > 50_000_000 {
            return Err(Error::invalid("shift grid has more than 5e7 points"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.t_max - self.t_min) / self.spacing * (1.0 + 1e-12)).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, k: usize) -> f64 {
        self.t_min + self.spacing * k as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }
}
