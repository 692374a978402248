use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::ShiftGrid;
use super::phase::phase_lower_bound;
use super::record::{record_distribution, ExperimentRecord, RecordBuilder};
use crate::quadrature::{
    integrate_abs_with_noise, l1_translate_distance, translate_distance, LineSegment, Norm, QuadratureConfig,
    TargetFunction, WeightFunction,
};
use crate::special::{eval_zeta, hardy_z, zeta_on_vertical_grid, zeta_rounding_noise, EvalAccuracy};
use crate::zeros::scan_zero_ordinates;
use crate::{par, Error, Result};

/// Default allowance below `(2/π) ∫|f|` for finite shift heights.
pub const DEFAULT_SLACK: f64 = 0.15;

fn check_template(f: &TargetFunction, seg: &LineSegment) -> Result<()> {
    seg.validate()?;
    if (f.domain_length() - seg.length).abs() > 1e-12 * seg.length.max(1.0) {
        return Err(Error::invalid(format!(
            "target domain length {} differs from segment length {}",
            f.domain_length(),
            seg.length
        )));
    }
    Ok(())
}

fn argmin(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(0, |best, (k, v)| if *v < values[best] { k } else { best })
}

/// Minimum over the shift grid of the L1 distance between `f` and
/// `G(T + t) ζ(1/2 + iT + it)`, compared with `(2/π) ∫|f|`.
///
/// At every shift the phase lower bound is evaluated too; for real `G` the
/// distance must dominate it up to `2 · abs_tol`.
pub fn nonuniversality_bound_run(
    f: &TargetFunction,
    g: &WeightFunction,
    seg_template: &LineSegment,
    grid: &ShiftGrid,
    cfg: &QuadratureConfig,
    slack: f64,
) -> Result<ExperimentRecord> {
    check_template(f, seg_template)?;
    grid.validate()?;
    cfg.validate()?;
    if seg_template.sigma != 0.5 {
        return Err(Error::domain(format!(
            "the non-universality bound concerns sigma = 1/2, got {}",
            seg_template.sigma
        )));
    }
    if !(0.0..1.0).contains(&slack) {
        return Err(Error::invalid(format!("slack must lie in [0, 1), got {slack}")));
    }
    let h = seg_template.length;
    g.check_covers(grid.t_min, grid.t_max + h)?;

    let mut rec = RecordBuilder::new("nonuniversality_bound_run");
    rec.input("target", f.describe())
        .input("weight", g.describe())
        .input("sigma", seg_template.sigma)
        .input("H", h)
        .input("grid", grid)
        .input("slack", slack)
        .input("quadrature", cfg);

    let shifts = grid.points();
    let rows = par::try_map(&shifts, |&t| {
        let seg = seg_template.at(t)?;
        let d = l1_translate_distance(f, &seg, g, cfg)?;
        let p = if g.is_real() {
            Some(phase_lower_bound(f, &seg, cfg)?.value)
        } else {
            None
        };
        Ok::<_, Error>((d, p))
    })?;
    let distances: Vec<f64> = rows.iter().map(|(d, _)| d.value).collect();
    let best = argmin(&distances);
    let unconverged = rows.iter().filter(|(d, _)| !d.converged).count();

    let abs_f = f.abs_integral(cfg)?;
    let bound = 2.0 / PI * abs_f.value;
    let min = distances[best];
    let is_zero = f.is_identically_zero()?;
    let identity = !is_zero && min <= 1e-6 * abs_f.value.max(1.0);

    rec.computed("min_distance", min)
        .computed("argmin_T", shifts[best])
        .computed("shifts", shifts.len() as f64)
        .computed("abs_integral_f", abs_f.value)
        .computed("unconverged_shifts", unconverged as f64)
        .flag("identity_case", identity)
        .reference("bound", bound)
        .reference("bound_with_slack", bound * (1.0 - slack));
    record_distribution(&mut rec, "distance", &distances);

    if g.is_real() {
        let tol = 2.0 * cfg.abs_tol;
        let mut violations = 0usize;
        let mut worst_gap = f64::INFINITY;
        for (d, p) in &rows {
            let p = p.expect("phase bound computed for real weights");
            worst_gap = worst_gap.min(d.value - p);
            if d.value < p - tol {
                violations += 1;
            }
        }
        rec.computed("phase_bound_at_argmin", rows[best].1.unwrap_or(f64::NAN))
            .computed("chain_violations", violations as f64)
            .computed("chain_min_gap", worst_gap)
            .check("chain_inequality", violations == 0);
    }
    rec.check("all_converged", unconverged == 0)
        .check("bound_with_slack", min >= bound * (1.0 - slack));
    if is_zero || identity {
        rec.informational();
    }
    Ok(rec.finish())
}

/// Best shift and the distribution of L1 or sup distances over a grid.
pub fn translate_search(
    f: &TargetFunction,
    seg_template: &LineSegment,
    grid: &ShiftGrid,
    norm: Norm,
    cfg: &QuadratureConfig,
) -> Result<ExperimentRecord> {
    check_template(f, seg_template)?;
    grid.validate()?;
    cfg.validate()?;
    let mut rec = RecordBuilder::new("translate_search");
    rec.input("target", f.describe())
        .input("sigma", seg_template.sigma)
        .input("H", seg_template.length)
        .input("grid", grid)
        .input("norm", norm)
        .input("quadrature", cfg);
    let shifts = grid.points();
    let distances = par::try_map(&shifts, |&t| {
        let seg = seg_template.at(t)?;
        Ok::<_, Error>(translate_distance(f, &seg, &WeightFunction::Unit, cfg, norm)?.value)
    })?;
    let best = argmin(&distances);
    let in_strip = seg_template.sigma > 0.5 && seg_template.sigma < 1.0;
    rec.computed("best_T", shifts[best])
        .computed("best_distance", distances[best])
        .computed("shifts", shifts.len() as f64)
        .flag("universality_strip", in_strip);
    record_distribution(&mut rec, "distance", &distances);
    rec.informational();
    Ok(rec.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZMode {
    /// `Z(T + t)`.
    Z,
    /// `|ζ(1/2 + iT + it)|`.
    AbsZ,
    /// `|ζ(1/2 + iT + it)|^{1/√(log log(T + t))}`.
    LoglogNormalizedAbs,
}

impl std::str::FromStr for ZMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(ZMode::Z),
            "absZ" | "absz" | "abs" => Ok(ZMode::AbsZ),
            "loglog" | "loglog-normalized-abs" => Ok(ZMode::LoglogNormalizedAbs),
            other => Err(Error::invalid(format!(
                "unknown mode '{other}' (expected Z, absZ or loglog)"
            ))),
        }
    }
}

fn z_curve(mode: ZMode, u: f64, acc: &EvalAccuracy) -> Result<f64> {
    match mode {
        ZMode::Z => Ok(hardy_z(u, acc)?.value),
        ZMode::AbsZ => Ok(eval_zeta(Complex64::new(0.5, u), acc)?.norm()),
        ZMode::LoglogNormalizedAbs => {
            let m = eval_zeta(Complex64::new(0.5, u), acc)?.norm();
            Ok(m.powf(1.0 / u.ln().ln().sqrt()))
        }
    }
}

/// L1 distances between a real target and `Z`, `|ζ|` or the log-log
/// normalised `|ζ|` on the critical line, over a shift grid. Always
/// informational: these are open questions.
pub fn z_universality_search(
    f: &TargetFunction,
    h: f64,
    grid: &ShiftGrid,
    mode: ZMode,
    cfg: &QuadratureConfig,
) -> Result<ExperimentRecord> {
    grid.validate()?;
    cfg.validate()?;
    if (f.domain_length() - h).abs() > 1e-12 * h.max(1.0) {
        return Err(Error::invalid(format!(
            "target domain length {} differs from H = {h}",
            f.domain_length()
        )));
    }
    match mode {
        ZMode::Z if !f.is_real_valued()? => return Err(Error::domain("mode Z needs a real-valued target")),
        ZMode::AbsZ | ZMode::LoglogNormalizedAbs if !f.is_nonnegative()? => {
            return Err(Error::domain("modulus modes need a non-negative target"))
        }
        ZMode::LoglogNormalizedAbs if grid.t_min < std::f64::consts::E.powi(2) => {
            return Err(Error::domain(format!(
                "log-log mode needs T_min >= e^2, got {}",
                grid.t_min
            )))
        }
        _ => {}
    }
    let mut rec = RecordBuilder::new("z_universality_search");
    rec.input("target", f.describe())
        .input("H", h)
        .input("grid", grid)
        .input("mode", mode)
        .input("quadrature", cfg);
    let shifts = grid.points();
    let distances = par::try_map(&shifts, |&t| {
        let wcfg = cfg.for_window(h, t + h);
        let acc = wcfg.zeta_accuracy(h, t + h);
        let acc_f = wcfg.zeta_accuracy(h, f.height() + h);
        let noise = zeta_rounding_noise(0.5, t + h) + f.rounding_noise();
        // |Z| has a kink at every zero, invisible to the sign-change splitter
        // because the integrand need not change sign there.
        let mut cuts = vec![0.0];
        if mode != ZMode::Z {
            let scan = scan_zero_ordinates(t, t + h, None)?;
            cuts.extend(scan.zeros.iter().map(|z| z.ordinate - t).filter(|&x| x > 0.0 && x < h));
        }
        cuts.push(h);
        let mut total = 0.0;
        let integrand = |x: f64| {
            Ok(Complex64::new(
                f.eval_with(x, &acc_f)?.re - z_curve(mode, t + x, &acc)?,
                0.0,
            ))
        };
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let piece = wcfg.with_tol(wcfg.abs_tol * (b - a) / h);
            total += if mode == ZMode::LoglogNormalizedAbs {
                // |Z|^p with p < 1 has infinite slope at the zeros; the
                // substitution x = a + (b - a) u²(3 - 2u) flattens both ends.
                integrate_abs_with_noise(
                    |u| {
                        let x = a + (b - a) * u * u * (3.0 - 2.0 * u);
                        Ok(integrand(x)? * (6.0 * (b - a) * u * (1.0 - u)))
                    },
                    0.0,
                    1.0,
                    &piece,
                    noise * (b - a),
                )?
                .value
            } else {
                integrate_abs_with_noise(integrand, a, b, &piece, noise)?.value
            };
        }
        Ok::<_, Error>(total)
    })?;
    let best = argmin(&distances);
    rec.computed("best_T", shifts[best])
        .computed("best_distance", distances[best])
        .computed("shifts", shifts.len() as f64);
    record_distribution(&mut rec, "distance", &distances);
    rec.informational();
    Ok(rec.finish())
}

/// Fraction of shifts `T ∈ [0, T_max]` (sampled every `sample_step`) at which
/// `max_{t∈[0,H]} |f(t) − ζ(σ + iT + it)| < ε`, or `< ε T^{1/2−σ}` when
/// `scaled` is set.
///
/// `ζ` is evaluated once on a uniform grid covering `[0, T_max + H]`; each
/// window's sup is the max over the grid points it contains. The effective
/// sample step is the nearest multiple of the grid spacing.
pub fn density_measure(
    f: &TargetFunction,
    seg_template: &LineSegment,
    eps: f64,
    t_max: f64,
    sample_step: f64,
    scaled: bool,
    cfg: &QuadratureConfig,
) -> Result<ExperimentRecord> {
    check_template(f, seg_template)?;
    let sigma = seg_template.sigma;
    let h = seg_template.length;
    if !(sigma > 0.0 && sigma < 0.5) {
        return Err(Error::domain(format!(
            "density measure needs 0 < sigma < 1/2, got {sigma}"
        )));
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!(
            "eps must be a finite non-negative number, got {eps}"
        )));
    }
    if !(sample_step > 0.0 && sample_step <= h) {
        return Err(Error::invalid(format!(
            "sample step must lie in (0, H], got {sample_step}"
        )));
    }
    if !(t_max > 0.0 && t_max.is_finite() && t_max <= 1e7) {
        return Err(Error::invalid(format!("T_max must lie in (0, 1e7], got {t_max}")));
    }
    let mut rec = RecordBuilder::new("density_measure");
    rec.input("target", f.describe())
        .input("sigma", sigma)
        .input("H", h)
        .input("eps", eps)
        .input("T_max", t_max)
        .input("sample_step", sample_step)
        .input("scaled", scaled)
        .input("quadrature", cfg);

    let target_spacing = (h / 8.0).min(0.25 / (2.0 + t_max).ln());
    let per_window = (h / target_spacing).ceil() as usize;
    let spacing = h / per_window as f64;
    let stride = ((sample_step / spacing).round() as usize).max(1);
    let effective_step = stride as f64 * spacing;
    let samples = (t_max / effective_step).floor() as usize + 1;
    let total = (samples - 1) * stride + per_window + 1;

    let acc = EvalAccuracy::for_height(t_max + h);
    let block = 1 << 14;
    let starts: Vec<usize> = (0..total).step_by(block).collect();
    let pieces = par::try_map(&starts, |&s| {
        let n = block.min(total - s);
        zeta_on_vertical_grid(sigma, s as f64 * spacing, spacing, n, &acc)
    })?;
    let zeta: Vec<Complex64> = pieces.into_iter().flatten().collect();
    let f_vals: Vec<Complex64> = (0..=per_window)
        .map(|j| f.eval((j as f64 * spacing).min(h)))
        .collect::<Result<_>>()?;

    let mut hits = 0usize;
    let mut checkpoints = Vec::new();
    let mut decade = 10.0;
    while decade <= t_max * (1.0 + 1e-12) {
        checkpoints.push(decade);
        decade *= 10.0;
    }
    let mut next_checkpoint = 0;
    let mut fractions = Vec::new();
    for k in 0..samples {
        let t = k as f64 * effective_step;
        while next_checkpoint < checkpoints.len() && t > checkpoints[next_checkpoint] {
            fractions.push((checkpoints[next_checkpoint], hits as f64 / k as f64));
            next_checkpoint += 1;
        }
        let start = k * stride;
        let sup = (0..=per_window)
            .map(|j| (f_vals[j] - zeta[start + j]).norm())
            .fold(0.0, f64::max);
        let threshold = if scaled {
            eps * t.max(1.0).powf(0.5 - sigma)
        } else {
            eps
        };
        if sup < threshold {
            hits += 1;
        }
    }
    while next_checkpoint < checkpoints.len() {
        fractions.push((checkpoints[next_checkpoint], hits as f64 / samples as f64));
        next_checkpoint += 1;
    }
    let fraction = hits as f64 / samples as f64;
    rec.computed("fraction", fraction)
        .computed("hits", hits as f64)
        .computed("samples", samples as f64)
        .computed("effective_sample_step", effective_step)
        .computed("grid_spacing", spacing);
    for (c, frac) in &fractions {
        rec.computed(&format!("fraction_at_{c:e}"), *frac);
    }
    rec.reference("prop2_exponent", (2.0 * sigma - 1.0) / (1.0 + sigma))
        .reference("ingham_exponent", 3.0 * (1.0 - sigma) / (2.0 - sigma));
    if fractions.len() >= 2 {
        let last = fractions[fractions.len() - 1].1;
        let prev = fractions[fractions.len() - 2].1;
        rec.check("fraction_decays", last <= prev);
    } else {
        rec.informational();
    }
    Ok(rec.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::Verdict;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn constant_target_bound() {
        let f = TargetFunction::real_constant(1.0, 1.0).unwrap();
        let seg = LineSegment::new(0.5, 1e3, 1.0).unwrap();
        let grid = ShiftGrid::phase_locked(1e3, 1.05e3).unwrap();
        let r = nonuniversality_bound_run(&f, &WeightFunction::Unit, &seg, &grid, &cfg(), DEFAULT_SLACK).unwrap();
        assert_eq!(r.check("chain_inequality"), Some(true));
        assert!(r.computed("min_distance").unwrap() >= 0.541, "{}", r.to_json());
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn identity_and_zero_cases_are_informational() {
        let grid = ShiftGrid::phase_locked(1e3, 1.01e3).unwrap();
        let t0 = grid.point(7);
        let f = TargetFunction::zeta_translate(0.5, t0, 1.0).unwrap();
        let seg = LineSegment::new(0.5, 1e3, 1.0).unwrap();
        let r = nonuniversality_bound_run(&f, &WeightFunction::Unit, &seg, &grid, &cfg(), DEFAULT_SLACK).unwrap();
        assert_eq!(r.computed("identity_case"), Some(1.0));
        assert_eq!(r.computed("argmin_T"), Some(t0));
        assert!(r.computed("min_distance").unwrap() <= 1e-8);
        assert_eq!(r.verdict, Verdict::Informational);

        let zero = TargetFunction::zero(1.0).unwrap();
        let r = nonuniversality_bound_run(&zero, &WeightFunction::Unit, &seg, &grid, &cfg(), DEFAULT_SLACK).unwrap();
        assert!(r.computed("min_distance").unwrap() >= 0.0);
        assert_eq!(r.reference("bound"), Some(0.0));
        assert_eq!(r.verdict, Verdict::Informational);
    }

    #[test]
    fn search_recovers_translate() {
        let grid = ShiftGrid::uniform(200.0, 210.0, 0.5).unwrap();
        let f = TargetFunction::zeta_translate(0.75, grid.point(9), 1.0).unwrap();
        let seg = LineSegment::new(0.75, 200.0, 1.0).unwrap();
        let r = translate_search(&f, &seg, &grid, Norm::L1, &cfg()).unwrap();
        assert_eq!(r.computed("best_T"), Some(grid.point(9)));
        assert!(r.computed("best_distance").unwrap() <= 1e-6);
        assert_eq!(r.verdict, Verdict::Informational);
    }

    #[test]
    fn z_modes() {
        let grid = ShiftGrid::uniform(100.0, 110.0, 0.5).unwrap();
        let zero = TargetFunction::zero(1.0).unwrap();
        let r = z_universality_search(&zero, 1.0, &grid, ZMode::Z, &cfg()).unwrap();
        assert!(r.computed("best_distance").unwrap() > 0.0);

        let t0 = grid.point(4);
        let f = TargetFunction::abs_zeta_translate(t0, 1.0).unwrap();
        let r = z_universality_search(&f, 1.0, &grid, ZMode::AbsZ, &cfg()).unwrap();
        assert_eq!(r.computed("best_T"), Some(t0));
        assert!(r.computed("best_distance").unwrap() <= 1e-6);

        let complex = TargetFunction::constant(Complex64::new(1.0, 1.0), 1.0).unwrap();
        assert!(z_universality_search(&complex, 1.0, &grid, ZMode::Z, &cfg()).is_err());
        let neg = TargetFunction::real_constant(-1.0, 1.0).unwrap();
        assert!(z_universality_search(&neg, 1.0, &grid, ZMode::AbsZ, &cfg()).is_err());
        let low = ShiftGrid::uniform(5.0, 10.0, 1.0).unwrap();
        let one = TargetFunction::real_constant(1.0, 1.0).unwrap();
        assert!(z_universality_search(&one, 1.0, &low, ZMode::LoglogNormalizedAbs, &cfg()).is_err());
    }

    #[test]
    fn density_extremes() {
        let f = TargetFunction::real_constant(1.0, 0.1).unwrap();
        let seg = LineSegment::new(0.25, 0.0, 0.1).unwrap();
        let r = density_measure(&f, &seg, 0.0, 200.0, 0.05, false, &cfg()).unwrap();
        assert_eq!(r.computed("fraction"), Some(0.0));
        let r = density_measure(&f, &seg, 1e6, 200.0, 0.05, false, &cfg()).unwrap();
        assert_eq!(r.computed("fraction"), Some(1.0));
        assert!(density_measure(&f, &seg, 0.5, 200.0, 0.5, false, &cfg()).is_err());
        let bad = LineSegment::new(0.75, 0.0, 0.1).unwrap();
        assert!(density_measure(&f, &bad, 0.5, 200.0, 0.05, false, &cfg()).is_err());
    }
}
