use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::bernoulli_2k;
use crate::{ComplexValue, Error, Result};

const STIRLING_TERMS: usize = 12;
/// Arguments are shifted until `|z| >= SHIFT_RADIUS`; the first omitted
/// Stirling term is then below `1e-22`.
const SHIFT_RADIUS: f64 = 12.0;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Principal branch of `log Γ(z)` for `Re z > 0`.
///
/// Small arguments are shifted up with `log Γ(z) = log Γ(z + K) - Σ log(z + j)`
/// before the Stirling series is applied, so the result is continuous in `z`
/// on the right half plane. For `Re z <= 0` the reflection formula is used and
/// the imaginary part is only defined modulo `2π`.
pub fn log_gamma(z: ComplexValue) -> Result<ComplexValue> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(format!("log_gamma of non-finite argument {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::domain(format!("Γ has a pole at {}", z.re)));
    }
    let value = if z.re > 0.0 {
        log_gamma_right(z)
    } else {
        Complex64::new(PI.ln(), 0.0) - log_sin_pi(z) - log_gamma_right(1.0 - z)
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(format!("log_gamma overflow at {z}")))
    }
}

pub(crate) fn log_gamma_right(z: ComplexValue) -> ComplexValue {
    let mut correction = Complex64::new(0.0, 0.0);
    let mut w = z;
    if z.norm() < SHIFT_RADIUS {
        let reach = (SHIFT_RADIUS * SHIFT_RADIUS - z.im * z.im).max(0.0).sqrt() - z.re;
        let shift = reach.ceil().max(0.0) as usize;
        for j in 0..shift {
            correction += (z + j as f64).ln();
        }
        w = z + shift as f64;
    }
    stirling(w) - correction
}

fn stirling(w: ComplexValue) -> ComplexValue {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut power = inv;
    let mut series = Complex64::new(0.0, 0.0);
    for k in 1..=STIRLING_TERMS {
        let two_k = (2 * k) as f64;
        series += power * (bernoulli_2k(k) / (two_k * (two_k - 1.0)));
        power *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series
}

/// `log sin(πz)` without overflow for large `|Im z|` (imaginary part mod `2π`).
pub(crate) fn log_sin_pi(z: ComplexValue) -> ComplexValue {
    let w = z * PI;
    let i = Complex64::i();
    if w.im.abs() < 10.0 {
        w.sin().ln()
    } else if w.im > 0.0 {
        Complex64::new(0.5f64.ln(), FRAC_PI_2) - i * w + (1.0 - (2.0 * i * w).exp()).ln()
    } else {
        Complex64::new(0.5f64.ln(), -FRAC_PI_2) + i * w + (1.0 - (-2.0 * i * w).exp()).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        Complex64::new(re, im)
    }

    /// Independent route: push the argument 200 steps up, apply a bare
    /// five-term Stirling series there, and subtract the logs of the steps.
    fn shifted_stirling_oracle(z: ComplexValue) -> ComplexValue {
        let steps = 200;
        let w = z + steps as f64;
        let stirling = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * w) - 1.0 / (360.0 * w.powi(3))
            + 1.0 / (1260.0 * w.powi(5))
            - 1.0 / (1680.0 * w.powi(7))
            + 1.0 / (1188.0 * w.powi(9));
        let logs: ComplexValue = (0..steps).map(|j| (z + j as f64).ln()).sum();
        stirling - logs
    }

    #[test]
    fn log_gamma_one_is_zero() {
        let v = log_gamma(c(1.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-14, "{v}");
    }

    #[test]
    fn log_gamma_half_is_log_sqrt_pi() {
        let v = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((v.re - 0.5 * PI.ln()).abs() < 1e-13);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn log_gamma_matches_shift_oracle() {
        for z in [c(0.25, 50.0), c(0.25, 0.5), c(3.7, -12.0), c(0.01, 3.0), c(40.0, 1e3)] {
            let got = log_gamma(z).unwrap();
            let want = shifted_stirling_oracle(z);
            assert!((got - want).norm() < 1e-10, "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn log_gamma_integer_factorials() {
        let mut fact = 1.0f64;
        for n in 1..20 {
            let v = log_gamma(c(n as f64 + 1.0, 0.0)).unwrap();
            fact *= n as f64;
            assert!((v.re - fact.ln()).abs() < 1e-12 * fact.ln().max(1.0));
        }
    }

    #[test]
    fn reflection_matches_modulus() {
        // |Γ(-1/2)| = 2√π
        let v = log_gamma(c(-0.5, 0.0)).unwrap();
        assert!((v.re - (2.0 * PI.sqrt()).ln()).abs() < 1e-13);
        let z = c(-2.3, 40.0);
        let direct = log_gamma(z).unwrap();
        let via_recurrence = log_gamma(z + 3.0).unwrap() - (0..3).map(|j| (z + j as f64).ln()).sum::<ComplexValue>();
        assert!((direct.re - via_recurrence.re).abs() < 1e-10);
        let turns = (direct.im - via_recurrence.im) / (2.0 * PI);
        assert!((turns - turns.round()).abs() < 1e-10);
    }

    #[test]
    fn poles_are_domain_errors() {
        for x in [0.0, -1.0, -7.0] {
            assert!(matches!(log_gamma(c(x, 0.0)), Err(Error::Domain(_))));
        }
        assert!(log_gamma(c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn continuous_along_vertical_line() {
        let mut prev = log_gamma(c(0.25, 0.0)).unwrap();
        for k in 1..4000 {
            let v = log_gamma(c(0.25, k as f64 * 0.05)).unwrap();
            assert!((v.im - prev.im).abs() < 0.5, "jump at {}", k as f64 * 0.05);
            prev = v;
        }
    }
}
