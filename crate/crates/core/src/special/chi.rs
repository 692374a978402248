use std::f64::consts::PI;

use num_complex::Complex64;

use super::log_gamma;
use crate::{ComplexValue, Error, Result};

/// `log χ(s)` (imaginary part mod `2π`), or `None` where `χ(s) = 0`.
///
/// Uses `χ(s) = π^{s-1/2} Γ((1-s)/2) / Γ(s/2)`, which equals
/// `2^s π^{s-1} sin(πs/2) Γ(1-s)` but has no removable singularities at the
/// positive even integers.
fn log_chi(s: ComplexValue) -> Result<Option<ComplexValue>> {
    if s.im == 0.0 && s.re == s.re.round() {
        let n = s.re as i64;
        if n >= 1 && n % 2 == 1 {
            return Err(Error::domain(format!("χ(s) has a pole at s = {n}")));
        }
        if n <= 0 && n % 2 == 0 {
            return Ok(None);
        }
    }
    let upper = log_gamma((1.0 - s) * 0.5)?;
    let lower = log_gamma(s * 0.5)?;
    Ok(Some((s - 0.5) * PI.ln() + upper - lower))
}

/// Functional-equation factor with `ζ(s) = χ(s) ζ(1 - s)`.
pub fn chi_factor(s: ComplexValue) -> Result<ComplexValue> {
    match log_chi(s)? {
        None => Ok(Complex64::new(0.0, 0.0)),
        Some(l) => {
            let v = l.exp();
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::domain(format!("χ(s) overflows at s = {s}")))
            }
        }
    }
}

/// `log |χ(s)|`; `-∞` where `χ` vanishes.
pub fn log_chi_modulus(s: ComplexValue) -> Result<f64> {
    Ok(log_chi(s)?.map_or(f64::NEG_INFINITY, |l| l.re))
}
