use num_complex::Complex64;

use super::riemann_siegel::{riemann_siegel_z, use_riemann_siegel};
use super::{eval_zeta, riemann_siegel_theta, EvalAccuracy};
use crate::{Error, Result};

/// `Z(t)` together with the imaginary part left over by `e^{iθ(t)} ζ(1/2+it)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyZ {
    pub value: f64,
    pub imag_residual: f64,
}

/// Hardy's function `Z(t) = e^{iθ(t)} ζ(1/2 + it)`.
pub fn hardy_z(t: f64, acc: &EvalAccuracy) -> Result<HardyZ> {
    acc.validate()?;
    if !t.is_finite() {
        return Err(Error::domain(format!("Z of non-finite t = {t}")));
    }
    if use_riemann_siegel(t, acc) {
        return Ok(HardyZ {
            value: riemann_siegel_z(t)?,
            imag_residual: 0.0,
        });
    }
    let theta = riemann_siegel_theta(t)?;
    let zeta = eval_zeta(Complex64::new(0.5, t), acc)?;
    let rotated = Complex64::from_polar(1.0, theta) * zeta;
    let limit = (10.0 * acc.abs_tol).max(1e-8);
    if rotated.im.abs() > limit {
        return Err(Error::AccuracyUnreachable {
            abs_tol: acc.abs_tol,
            max_terms: acc.max_terms,
            height: t,
        });
    }
    Ok(HardyZ {
        value: rotated.re,
        imag_residual: rotated.im,
    })
}
