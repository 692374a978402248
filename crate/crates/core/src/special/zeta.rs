use std::f64::consts::PI;

use num_complex::Complex64;

use super::bernoulli::MAX_K;
use super::riemann_siegel::{riemann_siegel_z, use_riemann_siegel};
use super::{bernoulli_ratio, chi_factor, riemann_siegel_theta, EvalAccuracy, MAX_HEIGHT};
use crate::{ComplexValue, Error, Result};

const MAX_CORRECTIONS: usize = MAX_K - 1;
/// Points per block in [`zeta_on_vertical_grid`]; the phasor recurrence is
/// re-seeded at every block start.
const GRID_BLOCK: usize = 256;

/// Euler–Maclaurin tail for cut `n`: the Bernoulli corrections
/// `Σ_k B_{2k}/(2k)! · s(s+1)…(s+2k-2) · n^{1-s-2k}` summed until the remainder
/// bound `|T_{m+1}| |s+2m+1| / (σ+2m+1)` drops below `budget`.
fn corrections(s: ComplexValue, n: f64, budget: f64) -> Option<ComplexValue> {
    let n_pow = (-s * n.ln()).exp();
    let inv_n2 = 1.0 / (n * n);
    let mut poly = s;
    let mut power = n_pow / n;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last_bound = f64::INFINITY;
    for k in 1..=MAX_CORRECTIONS {
        sum += poly * power * bernoulli_ratio(k);
        let kf = k as f64;
        poly = poly * (s + (2.0 * kf - 1.0)) * (s + 2.0 * kf);
        power *= inv_n2;
        let next = (poly * power).norm() * bernoulli_ratio(k + 1).abs();
        let bound = next * (s + (2.0 * kf + 1.0)).norm() / (s.re + 2.0 * kf + 1.0);
        if bound <= budget {
            return Some(sum);
        }
        if bound > last_bound {
            return None;
        }
        last_bound = bound;
    }
    None
}

/// `N^{1-s}/(s-1) + N^{-s}/2 + corrections`.
fn em_tail(s: ComplexValue, n: usize, budget: f64) -> Option<ComplexValue> {
    let nf = n as f64;
    let corr = corrections(s, nf, budget)?;
    let n_pow = (-s * nf.ln()).exp();
    Some(n_pow * nf / (s - 1.0) + n_pow * 0.5 + corr)
}

/// Smallest cut (on a geometric ladder from `|s|/2π`) whose remainder bound
/// meets `budget`.
fn plan_cut(s: ComplexValue, budget: f64, max_terms: usize) -> Result<(usize, ComplexValue)> {
    let mut n = ((s.norm() / (2.0 * PI)).ceil() as usize).max(8);
    loop {
        if n > max_terms {
            return Err(Error::AccuracyUnreachable {
                abs_tol: 2.0 * budget,
                max_terms,
                height: s.im,
            });
        }
        if let Some(tail) = em_tail(s, n, budget) {
            return Ok((n, tail));
        }
        n = n + n / 4 + 1;
    }
}

fn dirichlet_partial_sum(s: ComplexValue, upto: usize) -> ComplexValue {
    let (sigma, t) = (s.re, s.im);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in (1..upto).rev() {
        let ln = (n as f64).ln();
        let mag = if sigma == 0.5 {
            1.0 / (n as f64).sqrt()
        } else {
            (-sigma * ln).exp()
        };
        let (sin, cos) = (t * ln).sin_cos();
        sum += Complex64::new(mag * cos, -mag * sin);
    }
    sum
}

fn check_argument(s: ComplexValue) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::domain(format!("zeta of non-finite argument {s}")));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::PoleAt1);
    }
    if s.im.abs() > MAX_HEIGHT {
        return Err(Error::domain(format!(
            "|Im s| = {} exceeds the height cap {MAX_HEIGHT}",
            s.im.abs()
        )));
    }
    Ok(())
}

/// `ζ(s)` by Euler–Maclaurin summation only (no reflection, no fast path).
/// Valid for `Re s >= 0`.
pub fn eval_zeta_euler_maclaurin(s: ComplexValue, acc: &EvalAccuracy) -> Result<ComplexValue> {
    acc.validate()?;
    check_argument(s)?;
    let (n, tail) = plan_cut(s, 0.5 * acc.abs_tol, acc.max_terms)?;
    Ok(dirichlet_partial_sum(s, n) + tail)
}

/// Riemann zeta function with absolute error at most `acc.abs_tol`.
///
/// Euler–Maclaurin summation with the cut chosen from the remainder bound;
/// `σ < 0` goes through `ζ(s) = χ(s) ζ(1-s)`. On `σ = 1/2` the Riemann–Siegel
/// formula is used instead once its error bound is below the tolerance.
pub fn eval_zeta(s: ComplexValue, acc: &EvalAccuracy) -> Result<ComplexValue> {
    acc.validate()?;
    check_argument(s)?;
    if s.im < 0.0 {
        return eval_zeta(s.conj(), acc).map(|z| z.conj());
    }
    if s.re < 0.0 {
        let chi = chi_factor(s)?;
        if chi == Complex64::new(0.0, 0.0) {
            return Ok(chi);
        }
        let inner = acc.with_tol(acc.abs_tol / chi.norm().max(1.0));
        return Ok(chi * eval_zeta(1.0 - s, &inner)?);
    }
    if s.re == 0.5 && use_riemann_siegel(s.im, acc) {
        let z = riemann_siegel_z(s.im)?;
        let theta = riemann_siegel_theta(s.im)?;
        return Ok(Complex64::from_polar(z, -theta));
    }
    eval_zeta_euler_maclaurin(s, acc)
}

/// `ζ(σ + i(t0 + j·step))` for `j = 0..count`.
///
/// Along a uniform vertical grid the Dirichlet terms are advanced with
/// `n^{-i(t+h)} = n^{-it} · n^{-ih}`, one complex multiply per term and point
/// instead of a `sin_cos`. The recurrence restarts every block of points and
/// each block plans its own Euler–Maclaurin cut, so the accuracy contract is
/// the same as [`eval_zeta`].
pub fn zeta_on_vertical_grid(
    sigma: f64,
    t0: f64,
    step: f64,
    count: usize,
    acc: &EvalAccuracy,
) -> Result<Vec<ComplexValue>> {
    acc.validate()?;
    if !(step.is_finite() && step > 0.0) && count > 1 {
        return Err(Error::invalid(format!("grid step must be positive, got {step}")));
    }
    let at = |j: usize| t0 + j as f64 * step;
    let mut out = Vec::with_capacity(count);
    let mut start = 0;
    while start < count {
        let end = (start + GRID_BLOCK).min(count);
        let lo = at(start);
        let pointwise =
            sigma < 0.0 || lo < 0.0 || (sigma == 1.0 && lo <= 0.0) || (sigma == 0.5 && use_riemann_siegel(lo, acc));
        if pointwise {
            for j in start..end {
                out.push(eval_zeta(Complex64::new(sigma, at(j)), acc)?);
            }
        } else {
            block_euler_maclaurin(sigma, lo, step, end - start, acc, &mut out)?;
        }
        start = end;
    }
    Ok(out)
}

fn block_euler_maclaurin(
    sigma: f64,
    t_first: f64,
    step: f64,
    len: usize,
    acc: &EvalAccuracy,
    out: &mut Vec<ComplexValue>,
) -> Result<()> {
    let budget = 0.5 * acc.abs_tol;
    let top = Complex64::new(sigma, t_first + (len - 1) as f64 * step);
    check_argument(top)?;
    let (cut, _) = plan_cut(top, budget, acc.max_terms)?;

    let mut sums = vec![Complex64::new(0.0, 0.0); len];
    for n in (1..cut).rev() {
        let ln = (n as f64).ln();
        let mag = (-sigma * ln).exp();
        let (sin, cos) = (t_first * ln).sin_cos();
        let mut phasor = Complex64::new(mag * cos, -mag * sin);
        let (rs, rc) = (step * ln).sin_cos();
        let rot = Complex64::new(rc, -rs);
        for slot in sums.iter_mut() {
            *slot += phasor;
            phasor *= rot;
        }
    }
    for (j, partial) in sums.into_iter().enumerate() {
        let s = Complex64::new(sigma, t_first + j as f64 * step);
        check_argument(s)?;
        match em_tail(s, cut, budget) {
            Some(tail) => out.push(partial + tail),
            None => out.push(eval_zeta(s, acc)?),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        Complex64::new(re, im)
    }

    const FIRST_ZERO: f64 = 14.134_725_141_734_693;

    #[test]
    fn zeta_two_and_four() {
        let acc = EvalAccuracy::default().with_tol(1e-13);
        let z2 = eval_zeta(c(2.0, 0.0), &acc).unwrap();
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-12 && z2.im == 0.0);
        let z4 = eval_zeta(c(4.0, 0.0), &acc).unwrap();
        assert!((z4.re - PI.powi(4) / 90.0).abs() < 1e-12);
    }

    #[test]
    fn zeta_at_zero_and_negative_integers() {
        let acc = EvalAccuracy::default().with_tol(1e-13);
        assert!((eval_zeta(c(0.0, 0.0), &acc).unwrap().re + 0.5).abs() < 1e-12);
        assert!((eval_zeta(c(-1.0, 0.0), &acc).unwrap().re + 1.0 / 12.0).abs() < 1e-12);
        assert_eq!(eval_zeta(c(-2.0, 0.0), &acc).unwrap(), c(0.0, 0.0));
        assert!((eval_zeta(c(-3.0, 0.0), &acc).unwrap().re - 1.0 / 120.0).abs() < 1e-12);
    }

    #[test]
    fn zeta_half() {
        let acc = EvalAccuracy::default().with_tol(1e-13);
        let v = eval_zeta(c(0.5, 0.0), &acc).unwrap();
        assert!((v.re + 1.460_354_508_809_586_8).abs() < 1e-12, "{v}");
    }

    #[test]
    fn vanishes_at_first_zero() {
        let v = eval_zeta(c(0.5, FIRST_ZERO), &EvalAccuracy::default()).unwrap();
        assert!(v.norm() < 1e-5);
        let tight = EvalAccuracy::default().with_tol(1e-13);
        let v = eval_zeta(c(0.5, FIRST_ZERO), &tight).unwrap();
        assert!(v.norm() < 1e-12, "{v}");
    }

    #[test]
    fn pole_and_cap() {
        let acc = EvalAccuracy::default();
        assert_eq!(eval_zeta(c(1.0, 0.0), &acc), Err(Error::PoleAt1));
        assert!(matches!(eval_zeta(c(0.5, 2e7), &acc), Err(Error::Domain(_))));
    }

    #[test]
    fn term_cap_is_reported() {
        let acc = EvalAccuracy::new(1e-10, 100).unwrap();
        assert!(matches!(
            eval_zeta(c(0.75, 5000.0), &acc),
            Err(Error::AccuracyUnreachable { .. })
        ));
    }

    #[test]
    fn conjugate_symmetry_is_exact() {
        let acc = EvalAccuracy::default();
        for s in [c(0.3, 17.0), c(-0.4, 120.0), c(0.5, 3000.0), c(2.5, 1.0)] {
            let a = eval_zeta(s.conj(), &acc).unwrap();
            let b = eval_zeta(s, &acc).unwrap().conj();
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn doubling_max_terms_is_stable() {
        for s in [c(0.5, 777.0), c(0.8, 2500.0), c(0.1, 100.0)] {
            let acc = EvalAccuracy::default().without_fast_path();
            let a = eval_zeta(s, &acc).unwrap();
            let mut wide = acc;
            wide.max_terms *= 2;
            let b = eval_zeta(s, &wide).unwrap();
            assert!((a - b).norm() <= acc.abs_tol);
        }
    }

    #[test]
    fn grid_matches_pointwise() {
        let acc = EvalAccuracy::default();
        for sigma in [0.25, 0.75, 0.5] {
            let (t0, step, count) = (990.0, 0.0137, 600);
            let grid = zeta_on_vertical_grid(sigma, t0, step, count, &acc).unwrap();
            for (j, g) in grid.iter().enumerate().step_by(37) {
                let p = eval_zeta(c(sigma, t0 + j as f64 * step), &acc).unwrap();
                assert!((g - p).norm() < 1e-10, "σ={sigma} j={j}: {g} vs {p}");
            }
        }
    }

    #[test]
    fn grid_handles_negative_sigma() {
        let acc = EvalAccuracy::default();
        let grid = zeta_on_vertical_grid(-0.5, 10.0, 0.5, 5, &acc).unwrap();
        let p = eval_zeta(c(-0.5, 11.0), &acc).unwrap();
        assert!((grid[2] - p).norm() < 1e-12);
    }
}
