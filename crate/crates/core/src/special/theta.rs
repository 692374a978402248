use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::{bernoulli_2k, gamma::log_gamma_right, MAX_HEIGHT};
use crate::{Error, Result};

/// Below this height `θ` is taken from `log Γ` directly.
pub const THETA_ASYMPTOTIC_FROM: f64 = 10.0;

const EXPANSION_TERMS: usize = 6;

/// Explicit Stirling coefficients of
/// `θ(t) = (t/2) log(t/2π) - t/2 - π/8 + Σ_k c_k t^{1-2k}`,
/// with `c_k = (1 - 2^{1-2k}) |B_{2k}| / (4k(2k-1))`, i.e. `1/48, 7/5760, 31/80640, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaExpansion {
    coefficients: [f64; EXPANSION_TERMS],
    next_coefficient: f64,
}

impl ThetaExpansion {
    fn coefficient(k: usize) -> f64 {
        let two_k = (2 * k) as f64;
        (1.0 - 2f64.powi(1 - 2 * k as i32)) * bernoulli_2k(k).abs() / (2.0 * two_k * (two_k - 1.0))
    }

    pub fn standard() -> &'static ThetaExpansion {
        static EXPANSION: OnceLock<ThetaExpansion> = OnceLock::new();
        EXPANSION.get_or_init(|| {
            let mut coefficients = [0.0; EXPANSION_TERMS];
            for (k, c) in coefficients.iter_mut().enumerate() {
                *c = Self::coefficient(k + 1);
            }
            ThetaExpansion {
                coefficients,
                next_coefficient: Self::coefficient(EXPANSION_TERMS + 1),
            }
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Leading part `(t/2) log(t/2π) - t/2 - π/8`.
    pub fn leading(t: f64) -> f64 {
        0.5 * t * (t.ln() - (2.0 * PI).ln()) - 0.5 * t - PI / 8.0
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        let inv = 1.0 / t;
        let inv2 = inv * inv;
        let mut power = inv;
        let mut tail = 0.0;
        for c in &self.coefficients {
            tail += c * power;
            power *= inv2;
        }
        Self::leading(t) + tail
    }

    /// Magnitude of the first omitted term; decreasing in `t`.
    pub fn remainder_bound(&self, t: f64) -> f64 {
        self.next_coefficient * t.powi(-(2 * EXPANSION_TERMS as i32 + 1))
    }
}

/// `θ(t) = Im log Γ(1/4 + it/2) - (t/2) log π`, computed from the principal
/// branch of `log Γ` (continuous from `θ(0) = 0`).
pub fn theta_via_log_gamma(t: f64) -> Result<f64> {
    check_height(t)?;
    let lg = log_gamma_right(Complex64::new(0.25, 0.5 * t));
    Ok(lg.im - 0.5 * t * PI.ln())
}

/// Riemann–Siegel theta function, odd in `t`.
pub fn riemann_siegel_theta(t: f64) -> Result<f64> {
    check_height(t)?;
    let a = t.abs();
    let value = if a >= THETA_ASYMPTOTIC_FROM {
        ThetaExpansion::standard().evaluate(a)
    } else {
        theta_via_log_gamma(a)?
    };
    Ok(if t < 0.0 { -value } else { value })
}

fn check_height(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::domain(format!("theta of non-finite t = {t}")));
    }
    if t.abs() > MAX_HEIGHT {
        return Err(Error::domain(format!("|t| = {t} exceeds the height cap {MAX_HEIGHT}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_coefficients() {
        let c = ThetaExpansion::standard().coefficients();
        assert!((c[0] - 1.0 / 48.0).abs() < 1e-17);
        assert!((c[1] - 7.0 / 5760.0).abs() < 1e-18);
        assert!((c[2] - 31.0 / 80640.0).abs() < 1e-18);
        assert!((c[3] - 127.0 / 430080.0).abs() < 1e-18);
    }

    #[test]
    fn theta_at_zero() {
        assert_eq!(riemann_siegel_theta(0.0).unwrap(), 0.0);
        assert!(theta_via_log_gamma(0.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn expansion_agrees_with_log_gamma() {
        for t in [10.0, 12.5, 30.0, 100.0, 1000.0, 12345.6] {
            let a = ThetaExpansion::standard().evaluate(t);
            let b = theta_via_log_gamma(t).unwrap();
            assert!((a - b).abs() < 1e-10 * (1.0 + t / 1000.0), "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn remainder_bound_is_monotone() {
        let e = ThetaExpansion::standard();
        let mut prev = f64::INFINITY;
        for k in 0..100 {
            let b = e.remainder_bound(10.0 + k as f64);
            assert!(b < prev);
            prev = b;
        }
        assert!(e.remainder_bound(10.0) < 1e-12);
    }

    #[test]
    fn theta_is_odd() {
        for t in [0.3, 5.0, 17.0, 250.0] {
            let p = riemann_siegel_theta(t).unwrap();
            let m = riemann_siegel_theta(-t).unwrap();
            assert_eq!(p, -m);
        }
    }

    #[test]
    fn theta_rejects_beyond_cap() {
        assert!(riemann_siegel_theta(2e7).is_err());
        assert!(riemann_siegel_theta(f64::NAN).is_err());
    }
}
