use std::f64::consts::PI;

use num_complex::Complex64;

use super::record::{ExperimentRecord, RecordBuilder};
use crate::quadrature::{integrate_abs_with_noise, LineSegment, QuadOutcome, QuadratureConfig, TargetFunction};
use crate::special::{riemann_siegel_theta, theta_rounding_noise};
use crate::{Error, Result};

/// Target magnitude below which its phase is treated as undefined and the
/// phase-bound integrand is set to zero.
pub const PHASE_CUTOFF: f64 = 1e-14;

fn average_integral(a: f64, b: f64, c: f64, t: f64, cfg: &QuadratureConfig) -> Result<QuadOutcome> {
    let cfg = cfg.for_window(b - a, t + b);
    integrate_abs_with_noise(
        |x| Ok(Complex64::new((riemann_siegel_theta(x + t)? + c).sin(), 0.0)),
        a,
        b,
        &cfg,
        theta_rounding_noise(t + b),
    )
}

fn check_average_args(a: f64, b: f64, c: f64, t: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::invalid(format!("need A < B, got A = {a}, B = {b}")));
    }
    if !(t >= 10.0 && t.is_finite()) {
        return Err(Error::invalid(format!("need T >= 10, got {t}")));
    }
    if !c.is_finite() {
        return Err(Error::invalid("C must be finite"));
    }
    Ok(())
}

/// `∫_A^B |sin(θ(t + T) + C)| dt` against its limit `2(B − A)/π`, with the
/// tolerance `4 (B − A) / log T`.
pub fn sine_phase_average(a: f64, b: f64, c: f64, t: f64, cfg: &QuadratureConfig) -> Result<ExperimentRecord> {
    check_average_args(a, b, c, t)?;
    let mut rec = RecordBuilder::new("sine_phase_average");
    rec.input("A", a)
        .input("B", b)
        .input("C", c)
        .input("T", t)
        .input("quadrature", cfg);
    let out = average_integral(a, b, c, t, cfg)?;
    let limit = 2.0 * (b - a) / PI;
    let deviation = (out.value - limit).abs();
    let tolerance = 4.0 * (b - a) / t.ln();
    rec.computed("value", out.value)
        .computed("quadrature_error", out.error)
        .computed("deviation", deviation)
        .computed("deviation_times_log_T", deviation * t.ln())
        .reference("limit", limit)
        .reference("tolerance", tolerance)
        .check("converged", out.converged)
        .check("within_tolerance", deviation <= tolerance);
    Ok(rec.finish())
}

/// [`sine_phase_average`] over several heights, fitting `deviation ≈ c / log T`
/// by least squares through the origin.
pub fn sine_phase_sweep(a: f64, b: f64, c: f64, heights: &[f64], cfg: &QuadratureConfig) -> Result<ExperimentRecord> {
    if heights.is_empty() {
        return Err(Error::invalid("sweep needs at least one height"));
    }
    for &t in heights {
        check_average_args(a, b, c, t)?;
    }
    let mut rec = RecordBuilder::new("sine_phase_sweep");
    rec.input("A", a)
        .input("B", b)
        .input("C", c)
        .input("T", heights)
        .input("quadrature", cfg);
    let limit = 2.0 * (b - a) / PI;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    let mut all_within = true;
    let mut all_converged = true;
    for &t in heights {
        let out = average_integral(a, b, c, t, cfg)?;
        let deviation = (out.value - limit).abs();
        let x = 1.0 / t.ln();
        sxy += deviation * x;
        sxx += x * x;
        all_within &= deviation <= 4.0 * (b - a) * x;
        all_converged &= out.converged;
        rec.computed(&format!("value_T{t:e}"), out.value)
            .computed(&format!("deviation_T{t:e}"), deviation);
    }
    let fitted = sxy / sxx;
    rec.computed("fitted_c", fitted)
        .reference("limit", limit)
        .reference("max_c", 5.0)
        .check("converged", all_converged)
        .check("within_tolerance", all_within)
        .check("fitted_c_bounded", fitted <= 5.0);
    Ok(rec.finish())
}

/// `∫_0^H |f(t)| |sin(θ(T + t) + η(t))| dt` with `f = |f| e^{iη}`: a lower
/// bound for `∫_0^H |f(t) − G(T+t) ζ(1/2 + iT + it)| dt` whenever `G` is real,
/// since `ζ(1/2 + it)` has argument `−θ(t)` modulo `π`.
pub fn phase_lower_bound(f: &TargetFunction, seg: &LineSegment, cfg: &QuadratureConfig) -> Result<QuadOutcome> {
    seg.validate()?;
    if seg.sigma != 0.5 {
        return Err(Error::domain(format!(
            "phase lower bound needs sigma = 1/2, got {}",
            seg.sigma
        )));
    }
    let h = seg.length;
    if (f.domain_length() - h).abs() > 1e-12 * h.max(1.0) {
        return Err(Error::invalid(format!(
            "target domain length {} differs from segment length {h}",
            f.domain_length()
        )));
    }
    let cfg = cfg.for_window(h, seg.t_end().abs().max(f.height() + h));
    let acc = cfg.zeta_accuracy(h, f.height() + h);
    let noise = theta_rounding_noise(seg.t_end()) + f.rounding_noise();
    integrate_abs_with_noise(
        |t| {
            let v = f.eval_with(t, &acc)?;
            let m = v.norm();
            if m <= PHASE_CUTOFF {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let theta = riemann_siegel_theta(seg.t_start + t)?;
            Ok(Complex64::new(m * (theta + v.arg()).sin(), 0.0))
        },
        0.0,
        h,
        &cfg,
        noise,
    )
}
