use super::record::{ExperimentRecord, RecordBuilder};
use crate::quadrature::{
    l1_translate_distance, short_interval_mean, LineSegment, QuadratureConfig, TargetFunction, WeightFunction,
};
use crate::{par, Error, Result};

/// Allowed distance between the fitted and the reference slope.
pub const SLOPE_TOLERANCE: f64 = 0.1;
/// Windows averaged per height unless the caller asks otherwise.
pub const DEFAULT_WINDOWS: usize = 20;

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Log-log slope of the short-interval mean `∫_T^{T+δ} |ζ(σ + it)| dt`
/// against `T`, compared with `1/2 − σ`.
///
/// Single windows fluctuate by factors of several, so at each height the
/// mean is averaged over `windows` consecutive windows `[T + kδ, T + (k+1)δ]`.
/// The averaged L1 distance to `f ≡ 1` is reported alongside, together with
/// the slope of the first window alone.
pub fn growth_exponent_fit(
    sigma: f64,
    delta: f64,
    heights: &[f64],
    windows: usize,
    cfg: &QuadratureConfig,
) -> Result<ExperimentRecord> {
    if !(sigma > 0.0 && sigma < 0.5) {
        return Err(Error::domain(format!("growth fit needs 0 < sigma < 1/2, got {sigma}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::invalid(format!("delta must be positive, got {delta}")));
    }
    if windows == 0 {
        return Err(Error::invalid("at least one window per height is needed"));
    }
    if heights.len() < 3 {
        return Err(Error::invalid(format!(
            "growth fit needs at least 3 heights, got {}",
            heights.len()
        )));
    }
    if heights.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::invalid("heights must be positive"));
    }
    let (lo, hi) = heights
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &t| (l.min(t), h.max(t)));
    if hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::invalid("heights must span at least two decades"));
    }
    let mut rec = RecordBuilder::new("growth_exponent_fit");
    rec.input("sigma", sigma)
        .input("delta", delta)
        .input("T", heights)
        .input("windows", windows)
        .input("quadrature", cfg);

    let k = windows as f64;
    let span = k * delta;
    let one = TargetFunction::real_constant(1.0, span)?;
    let rows = par::try_map(heights, |&t| {
        let all = LineSegment::new(sigma, t, span)?;
        let mean = short_interval_mean(&all, cfg)?;
        let dist = l1_translate_distance(&one, &all, &WeightFunction::Unit, cfg)?;
        let first = short_interval_mean(&LineSegment::new(sigma, t, delta)?, cfg)?;
        Ok::<_, Error>((mean, dist, first))
    })?;
    let x: Vec<f64> = heights.iter().map(|t| t.ln()).collect();
    let y: Vec<f64> = rows.iter().map(|(m, _, _)| (m.value / k).ln()).collect();
    let y1: Vec<f64> = rows.iter().map(|(_, _, f)| f.value.ln()).collect();
    let slope = least_squares_slope(&x, &y);
    let reference = 0.5 - sigma;

    let mut order: Vec<usize> = (0..heights.len()).collect();
    order.sort_by(|&i, &j| heights[i].total_cmp(&heights[j]));
    let monotone = order.windows(2).all(|w| rows[w[1]].1.value > rows[w[0]].1.value);
    for (t, (m, d, f)) in heights.iter().zip(&rows) {
        rec.computed(&format!("mean_T{t:e}"), m.value / k)
            .computed(&format!("first_window_mean_T{t:e}"), f.value)
            .computed(&format!("distance_to_one_T{t:e}"), d.value / k);
    }
    rec.computed("slope", slope)
        .computed("slope_single_window", least_squares_slope(&x, &y1))
        .flag("distance_monotone", monotone)
        .reference("slope", reference)
        .reference("slope_tolerance", SLOPE_TOLERANCE)
        .check(
            "converged",
            rows.iter().all(|(m, d, f)| m.converged && d.converged && f.converged),
        )
        .check("slope_within_tolerance", (slope - reference).abs() <= SLOPE_TOLERANCE);
    Ok(rec.finish())
}
