//! Riemann–Siegel main sum with the first five correction terms.
//!
//! `Z(t) = 2 Σ_{n≤N} n^{-1/2} cos(θ(t) - t log n)
//!        + (-1)^{N-1} a^{-1/2} Σ_{k=0}^{4} C_k(p) a^{-k}`,
//! with `a = sqrt(t/2π)`, `N = ⌊a⌋`, `p = a - N`. The `C_k` are combinations of
//! derivatives of `Ψ(p) = cos(2π(p² - p - 1/16)) / cos(2πp)`, an entire
//! function; its Taylor coefficients about `p = 1/2` are obtained once from a
//! Cauchy integral on the unit circle.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::{riemann_siegel_theta, EvalAccuracy};
use crate::{Error, Result};

/// The correction series is only trusted from here up.
pub const RIEMANN_SIEGEL_MIN_HEIGHT: f64 = 200.0;

const TAYLOR_DEGREE: usize = 72;
const CAUCHY_NODES: usize = 160;

/// Error model after the `C_4` term: truncation `0.1 · t^{-11/4}` plus a
/// rounding floor `2e-15 · t` from the phases `θ(t) - t log n`.
pub fn riemann_siegel_error_bound(t: f64) -> f64 {
    let t = t.abs();
    0.1 * t.powf(-2.75) + 2e-15 * t
}

pub(crate) fn use_riemann_siegel(t: f64, acc: &EvalAccuracy) -> bool {
    acc.critical_line_fast_path
        && t.abs() >= RIEMANN_SIEGEL_MIN_HEIGHT
        && riemann_siegel_error_bound(t) <= 0.5 * acc.abs_tol
}

fn psi(z: Complex64) -> Complex64 {
    let two_pi = 2.0 * PI;
    (two_pi * (z * z - z - 1.0 / 16.0)).cos() / (two_pi * z).cos()
}

/// Polynomials in `w = p - 1/2` for `C_0..C_4`.
struct Corrections {
    polys: [Vec<f64>; 5],
}

fn taylor_of_psi() -> Vec<f64> {
    let center = Complex64::new(0.5, 0.0);
    let m = CAUCHY_NODES as f64;
    let values: Vec<(Complex64, Complex64)> = (0..CAUCHY_NODES)
        .map(|k| {
            let phi = 2.0 * PI * (k as f64 + 0.5) / m;
            let node = Complex64::from_polar(1.0, phi);
            (node, psi(center + node))
        })
        .collect();
    (0..=TAYLOR_DEGREE)
        .map(|j| {
            let sum: Complex64 = values.iter().map(|(node, v)| v * node.powi(-(j as i32))).sum();
            sum.re / m
        })
        .collect()
}

/// Coefficients of the `order`-th derivative of the series `Σ a_j w^j`.
fn derivative(series: &[f64], order: usize) -> Vec<f64> {
    (order..series.len())
        .map(|j| {
            let falling: f64 = ((j - order + 1)..=j).map(|x| x as f64).product();
            falling * series[j]
        })
        .collect()
}

fn combine(terms: &[(f64, &[f64])]) -> Vec<f64> {
    let len = terms.iter().map(|(_, p)| p.len()).max().unwrap_or(0);
    let mut out = vec![0.0; len];
    for (scale, poly) in terms {
        for (o, c) in out.iter_mut().zip(poly.iter()) {
            *o += scale * c;
        }
    }
    out
}

fn corrections() -> &'static Corrections {
    static CORRECTIONS: OnceLock<Corrections> = OnceLock::new();
    CORRECTIONS.get_or_init(|| {
        let a = taylor_of_psi();
        let d: Vec<Vec<f64>> = (0..=12).map(|k| derivative(&a, k)).collect();
        let p2 = PI * PI;
        let (p4, p6, p8) = (p2 * p2, p2 * p2 * p2, p2 * p2 * p2 * p2);
        let c0 = d[0].clone();
        let c1 = combine(&[(-1.0 / (96.0 * p2), &d[3])]);
        let c2 = combine(&[(1.0 / (18432.0 * p4), &d[6]), (1.0 / (64.0 * p2), &d[2])]);
        let c3 = combine(&[
            (-1.0 / (5_308_416.0 * p6), &d[9]),
            (-1.0 / (3840.0 * p4), &d[5]),
            (-1.0 / (64.0 * p2), &d[1]),
        ]);
        let c4 = combine(&[
            (1.0 / (2_038_431_744.0 * p8), &d[12]),
            (11.0 / (5_898_240.0 * p6), &d[8]),
            (19.0 / (24576.0 * p4), &d[4]),
            (1.0 / (128.0 * p2), &d[0]),
        ]);
        Corrections {
            polys: [c0, c1, c2, c3, c4],
        }
    })
}

fn horner(poly: &[f64], w: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, c| acc * w + c)
}

/// `C_k(p)` for `k = 0..=4`.
pub(crate) fn correction_coefficient(k: usize, p: f64) -> f64 {
    horner(&corrections().polys[k], p - 0.5)
}

/// Hardy's `Z(t)` via the Riemann–Siegel formula, `|t| >= 200`.
pub fn riemann_siegel_z(t: f64) -> Result<f64> {
    let t = t.abs();
    if t < RIEMANN_SIEGEL_MIN_HEIGHT {
        return Err(Error::domain(format!(
            "Riemann–Siegel formula needs t >= {RIEMANN_SIEGEL_MIN_HEIGHT}, got {t}"
        )));
    }
    let theta = riemann_siegel_theta(t)?;
    let a = (t / (2.0 * PI)).sqrt();
    let n = a.floor() as usize;
    let p = a - n as f64;

    let mut main = 0.0;
    for k in (1..=n).rev() {
        let kf = k as f64;
        main += (theta - t * kf.ln()).cos() / kf.sqrt();
    }
    main *= 2.0;

    let inv_a = 1.0 / a;
    let mut series = 0.0;
    let mut power = 1.0;
    for k in 0..5 {
        series += correction_coefficient(k, p) * power;
        power *= inv_a;
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    Ok(main + sign * inv_a.sqrt() * series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::eval_zeta_euler_maclaurin;

    fn z_by_euler_maclaurin(t: f64) -> f64 {
        let acc = EvalAccuracy::new(1e-12, 10_000_000).unwrap();
        let zeta = eval_zeta_euler_maclaurin(Complex64::new(0.5, t), &acc).unwrap();
        (Complex64::from_polar(1.0, riemann_siegel_theta(t).unwrap()) * zeta).re
    }

    #[test]
    fn psi_taylor_reproduces_psi() {
        for p in [0.0, 0.1, 0.25, 0.49, 0.75, 0.999] {
            let direct = psi(Complex64::new(p + 1e-9 * (p == 0.25 || p == 0.75) as u8 as f64, 0.0)).re;
            let series = correction_coefficient(0, p);
            assert!((direct - series).abs() < 1e-7, "p={p}: {direct} vs {series}");
        }
        // C_0(0) = cos(π/8)·… known value Ψ(0) = cos(-π/8) = 0.92388
        assert!((correction_coefficient(0, 0.0) - (PI / 8.0).cos()).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_euler_maclaurin() {
        for t in [200.5, 333.3, 1000.0, 2718.28, 5000.0, 9999.9] {
            let rs = riemann_siegel_z(t).unwrap();
            let em = z_by_euler_maclaurin(t);
            let bound = riemann_siegel_error_bound(t);
            // The reference carries the same rounding floor.
            assert!(
                (rs - em).abs() <= 2.0 * bound,
                "t={t}: rs={rs} em={em} diff={:e} bound={bound:e}",
                (rs - em).abs()
            );
        }
    }

    #[test]
    fn rejects_low_heights() {
        assert!(riemann_siegel_z(100.0).is_err());
    }
}
