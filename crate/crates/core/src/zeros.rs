//! Critical-line zeros from sign changes of Hardy's `Z(t)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::fmt::sig12;
use crate::special::{hardy_z, riemann_siegel_theta, EvalAccuracy};
use crate::{par, Error, Result};

/// A zero ordinate bracketed by a sign change of `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub ordinate: f64,
    pub bracket_width: f64,
    pub z_left: f64,
    pub z_right: f64,
}

/// Raised alongside a scan whose zero count falls short of the smooth
/// Riemann–von Mangoldt estimate by more than two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridTooCoarse {
    pub t_lo: f64,
    pub t_hi: f64,
    pub grid_step: f64,
    pub expected: f64,
    pub observed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroScan {
    pub zeros: Vec<ZeroRecord>,
    pub grid_step: f64,
    pub warning: Option<GridTooCoarse>,
}

/// Observed zeros in `[T, T + delta]` against the density prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowCount {
    #[serde(rename = "T")]
    pub t: f64,
    pub delta: f64,
    pub observed: usize,
    /// `delta · log(T / 2π) / 2π`.
    pub predicted: f64,
    /// `delta · log(T) / 2π`, the cruder leading term.
    pub predicted_log_t: f64,
}

impl WindowCount {
    fn new(t: f64, delta: f64, observed: usize) -> Self {
        Self {
            t,
            delta,
            observed,
            predicted: delta * (t / (2.0 * PI)).ln() / (2.0 * PI),
            predicted_log_t: delta * t.ln() / (2.0 * PI),
        }
    }
}

/// Largest admissible grid step on `[.., t_hi]`: the mean zero gap there.
pub fn max_grid_step(t_hi: f64) -> f64 {
    let log = (t_hi.max(10.0) / (2.0 * PI)).ln().max(f64::MIN_POSITIVE);
    (PI / log).min(2.0)
}

/// Half the mean zero gap at `t_hi`, capped at 1.
pub fn default_grid_step(t_hi: f64) -> f64 {
    (0.5 * max_grid_step(t_hi)).min(1.0)
}

/// Smooth zero count `θ(T)/π + 1`.
pub fn estimate_n(t: f64) -> Result<f64> {
    if !(t >= 2.0 && t.is_finite()) {
        return Err(Error::invalid(format!("estimate_N needs T >= 2, got {t}")));
    }
    Ok(riemann_siegel_theta(t)? / PI + 1.0)
}

fn z_at(t: f64, acc: &EvalAccuracy) -> Result<f64> {
    Ok(hardy_z(t, acc)?.value)
}

fn refine(mut a: f64, mut b: f64, mut za: f64, mut zb: f64, acc: &EvalAccuracy) -> Result<ZeroRecord> {
    let secant = |a: f64, b: f64, za: f64, zb: f64| {
        let x = a - za * (b - a) / (zb - za);
        if x.is_finite() {
            x.clamp(a, b)
        } else {
            0.5 * (a + b)
        }
    };
    for _ in 0..200 {
        let width_ok = b - a <= 1e-9 * a.abs().max(1.0);
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if width_ok && za.abs().min(zb.abs()) <= 1e-7 {
            break;
        }
        let zm = z_at(m, acc)?;
        if zm == 0.0 {
            return Ok(ZeroRecord {
                ordinate: m,
                bracket_width: 0.0,
                z_left: za,
                z_right: zb,
            });
        }
        if (zm < 0.0) == (za < 0.0) {
            a = m;
            za = zm;
        } else {
            b = m;
            zb = zm;
        }
    }
    Ok(ZeroRecord {
        ordinate: secant(a, b, za, zb),
        bracket_width: b - a,
        z_left: za,
        z_right: zb,
    })
}

/// Zeros of `Z` in `[t_lo, t_hi]` from sign changes on a grid of spacing
/// at most `grid_step`, each refined by bisection until the bracket is
/// narrower than `1e-9 · max(1, γ)` and the smaller end value is below `1e-7`.
pub fn scan_zero_ordinates(t_lo: f64, t_hi: f64, grid_step: Option<f64>) -> Result<ZeroScan> {
    if !(t_lo.is_finite() && t_hi.is_finite() && t_lo >= 0.0 && t_lo < t_hi) {
        return Err(Error::invalid(format!(
            "scan range must satisfy 0 <= t_lo < t_hi, got [{t_lo}, {t_hi}]"
        )));
    }
    let limit = max_grid_step(t_hi);
    let step = grid_step.unwrap_or_else(|| default_grid_step(t_hi));
    if !(step > 0.0 && step <= limit) {
        return Err(Error::invalid(format!(
            "grid step {step} must lie in (0, {limit}] (one expected zero per step)"
        )));
    }
    let acc = EvalAccuracy::for_height(t_hi);
    let intervals = ((t_hi - t_lo) / step).ceil().max(1.0) as usize;
    let step = (t_hi - t_lo) / intervals as f64;
    let grid: Vec<f64> = (0..=intervals)
        .map(|k| if k == intervals { t_hi } else { t_lo + step * k as f64 })
        .collect();
    let values = par::try_map(&grid, |&t| z_at(t, &acc))?;
    let brackets: Vec<usize> = (0..intervals)
        .filter(|&k| (values[k] < 0.0) != (values[k + 1] < 0.0))
        .collect();
    let zeros = par::try_map(&brackets, |&k| {
        refine(grid[k], grid[k + 1], values[k], values[k + 1], &acc)
    })?;

    let warning = if t_lo >= 2.0 || t_hi >= 2.0 {
        let expected = estimate_n(t_hi.max(2.0))? - if t_lo >= 2.0 { estimate_n(t_lo)? } else { 0.0 };
        let expected = expected.max(0.0);
        (zeros.len() as f64 + 2.0 < expected).then_some(GridTooCoarse {
            t_lo,
            t_hi,
            grid_step: step,
            expected,
            observed: zeros.len(),
        })
    } else {
        None
    };
    Ok(ZeroScan {
        zeros,
        grid_step: step,
        warning,
    })
}

fn check_window(t: f64, delta: f64) -> Result<()> {
    if !(t >= 10.0 && t.is_finite()) {
        return Err(Error::invalid(format!("window count needs T >= 10, got {t}")));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid(format!("window length must lie in (0, 1], got {delta}")));
    }
    Ok(())
}

/// Zeros in `[T, T + delta]`.
pub fn window_zero_count(t: f64, delta: f64) -> Result<WindowCount> {
    check_window(t, delta)?;
    let scan = scan_zero_ordinates(t, t + delta, None)?;
    Ok(WindowCount::new(t, delta, scan.zeros.len()))
}

/// Counts for `count` back-to-back windows `[T + kδ, T + (k+1)δ]`, taken from one scan.
pub fn consecutive_window_counts(t: f64, delta: f64, count: usize) -> Result<Vec<WindowCount>> {
    check_window(t, delta)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let end = t + delta * count as f64;
    let scan = scan_zero_ordinates(t, end, None)?;
    let mut observed = vec![0usize; count];
    for z in &scan.zeros {
        let k = (((z.ordinate - t) / delta).floor() as usize).min(count - 1);
        observed[k] += 1;
    }
    Ok(observed
        .into_iter()
        .enumerate()
        .map(|(k, n)| WindowCount::new(t + delta * k as f64, delta, n))
        .collect())
}

/// CSV table `ordinate,bracket_width` with twelve significant digits.
pub fn zeros_to_csv(zeros: &[ZeroRecord]) -> String {
    let mut out = String::from("ordinate,bracket_width\n");
    for z in zeros {
        out.push_str(&sig12(z.ordinate));
        out.push(',');
        out.push_str(&sig12(z.bracket_width));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_zero() {
        let scan = scan_zero_ordinates(10.0, 15.0, None).unwrap();
        assert_eq!(scan.zeros.len(), 1);
        let z = scan.zeros[0];
        assert!((z.ordinate - 14.134725141734693).abs() < 1e-6);
        assert!(z.bracket_width <= 1e-9 * z.ordinate);
        assert!(z.z_left * z.z_right <= 0.0);
    }

    #[test]
    fn no_zero_below_ten() {
        assert!(scan_zero_ordinates(2.0, 5.0, None).unwrap().zeros.is_empty());
        assert!(scan_zero_ordinates(0.0, 14.0, None).unwrap().zeros.is_empty());
        let t = 20.0;
        assert!(scan_zero_ordinates(t - 1e-9, t, None).unwrap().zeros.is_empty());
    }

    #[test]
    fn estimate_near_first_zero() {
        let n = estimate_n(14.134725141734693).unwrap();
        assert!(n > 0.0 && n < 2.0);
        assert!(estimate_n(2.0).unwrap() > 0.0);
        assert!((estimate_n(100.0).unwrap() - 29.0).abs() < 0.1);
        assert!(estimate_n(1.0).is_err());
    }

    #[test]
    fn coarse_step_rejected() {
        assert!(scan_zero_ordinates(10.0, 100.0, Some(2.0)).is_err());
        assert!(scan_zero_ordinates(10.0, 5.0, None).is_err());
    }

    #[test]
    fn ordinates_are_zeros() {
        let acc = EvalAccuracy::default().with_tol(1e-12);
        for z in scan_zero_ordinates(0.0, 60.0, None).unwrap().zeros {
            assert!(hardy_z(z.ordinate, &acc).unwrap().value.abs() <= 1e-6, "{z:?}");
        }
    }

    #[test]
    fn window_counts() {
        let w = window_zero_count(1000.0, 1.0).unwrap();
        assert!(w.observed <= 3);
        assert!((w.predicted - 0.8063).abs() < 1e-3);
        assert_eq!(window_zero_count(1000.3, 1e-9).unwrap().observed, 0);
        assert!(window_zero_count(5.0, 1.0).is_err());
        assert!(window_zero_count(100.0, 1.5).is_err());
        let ws = consecutive_window_counts(1000.0, 1.0, 20).unwrap();
        let total: usize = ws.iter().map(|w| w.observed).sum();
        assert_eq!(total, scan_zero_ordinates(1000.0, 1020.0, None).unwrap().zeros.len());
    }

    #[test]
    fn csv_layout() {
        let csv = zeros_to_csv(&scan_zero_ordinates(10.0, 22.0, None).unwrap().zeros);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "ordinate,bracket_width");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("14.134725141"));
    }
}
