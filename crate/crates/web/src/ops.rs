//! The demo's operations as plain Rust, so they can be tested off the browser.

use std::f64::consts::PI;

use zlab_core::experiments::phase_lower_bound;
use zlab_core::quadrature::{l1_translate_distance, LineSegment, QuadratureConfig, TargetFunction, WeightFunction};
use zlab_core::special::{eval_zeta, hardy_z, EvalAccuracy};
use zlab_core::zeros::scan_zero_ordinates;
use zlab_core::Complex64;

/// Widest `t` range the plot accepts.
pub const MAX_SPAN: f64 = 2000.0;
/// Most samples the plot accepts.
pub const MAX_SAMPLES: usize = 20_000;
/// Highest shift the distance tool accepts.
pub const MAX_SHIFT: f64 = 1e6;

fn text(e: zlab_core::Error) -> String {
    e.to_string()
}

/// `[Re ζ, Im ζ, |ζ|]` at `σ + it`.
pub fn zeta_point(sigma: f64, t: f64) -> Result<[f64; 3], String> {
    let z = eval_zeta(Complex64::new(sigma, t), &EvalAccuracy::for_height(t)).map_err(text)?;
    Ok([z.re, z.im, z.norm()])
}

fn check_range(from: f64, to: f64) -> Result<(), String> {
    if !(from.is_finite() && to.is_finite() && from >= 0.0 && to > from) {
        return Err(format!("need 0 <= from < to, got [{from}, {to}]"));
    }
    if to - from > MAX_SPAN {
        return Err(format!("range wider than {MAX_SPAN}"));
    }
    Ok(())
}

/// `Z(t)` at `samples` evenly spaced points of `[from, to]`.
pub fn z_curve(from: f64, to: f64, samples: usize) -> Result<Vec<f64>, String> {
    check_range(from, to)?;
    if !(2..=MAX_SAMPLES).contains(&samples) {
        return Err(format!("samples must lie in [2, {MAX_SAMPLES}]"));
    }
    let step = (to - from) / (samples - 1) as f64;
    (0..samples)
        .map(|j| {
            let t = from + j as f64 * step;
            hardy_z(t, &EvalAccuracy::for_height(t)).map(|h| h.value).map_err(text)
        })
        .collect()
}

/// Zero ordinates in `[from, to]`.
pub fn zeros_between(from: f64, to: f64) -> Result<Vec<f64>, String> {
    check_range(from, to)?;
    let scan = scan_zero_ordinates(from, to, None).map_err(text)?;
    Ok(scan.zeros.iter().map(|z| z.ordinate).collect())
}

/// `[distance, phase bound, (2/π)∫|f|]` for the built-in target `spec` on
/// `[0, h]` against `ζ(1/2 + iT + it)`.
pub fn shift_distance(spec: &str, h: f64, shift: f64) -> Result<[f64; 3], String> {
    if !(0.0..=MAX_SHIFT).contains(&shift) {
        return Err(format!("shift must lie in [0, {MAX_SHIFT}]"));
    }
    if !(h > 0.0 && h <= 10.0) {
        return Err("H must lie in (0, 10]".into());
    }
    let f = TargetFunction::parse_builtin(spec, h).map_err(text)?;
    let seg = LineSegment::new(0.5, shift, h).map_err(text)?;
    let cfg = QuadratureConfig::default().with_tol(1e-7);
    let d = l1_translate_distance(&f, &seg, &WeightFunction::Unit, &cfg).map_err(text)?;
    let p = phase_lower_bound(&f, &seg, &cfg).map_err(text)?;
    let reference = 2.0 / PI * f.abs_integral(&cfg).map_err(text)?.value;
    Ok([d.value, p.value, reference])
}
