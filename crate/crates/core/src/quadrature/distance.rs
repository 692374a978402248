use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::adaptive::{integrate_abs_with_noise, sup_abs, QuadOutcome};
use super::config::QuadratureConfig;
use super::target::{LineSegment, TargetFunction, WeightFunction};
use crate::special::{eval_zeta, zeta_rounding_noise};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    Sup,
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Norm::L1),
            "sup" | "max" => Ok(Norm::Sup),
            other => Err(Error::invalid(format!("unknown norm '{other}' (expected l1 or sup)"))),
        }
    }
}

fn check_lengths(f: &TargetFunction, seg: &LineSegment) -> Result<()> {
    seg.validate()?;
    let h = seg.length;
    if (f.domain_length() - h).abs() > 1e-12 * h.max(1.0) {
        return Err(Error::invalid(format!(
            "target domain length {} differs from segment length {h}",
            f.domain_length()
        )));
    }
    Ok(())
}

/// Distance between `f` and `t ↦ G(T + t) ζ(σ + i(T + t))` on `[0, H]`, in
/// the L1 norm or as a max over the quadrature grid. For the sup norm the
/// outcome carries the max in `value` with zero error.
pub fn translate_distance(
    f: &TargetFunction,
    seg: &LineSegment,
    g: &WeightFunction,
    cfg: &QuadratureConfig,
    norm: Norm,
) -> Result<QuadOutcome> {
    check_lengths(f, seg)?;
    g.check_covers(seg.t_start, seg.t_end())?;
    let h = seg.length;
    let height = seg.t_end().abs().max(f.height() + h);
    let cfg = cfg.for_window(h, height);
    let acc = cfg.zeta_accuracy(h, seg.t_end().abs());
    let acc_f = cfg.zeta_accuracy(h, f.height() + h);
    let integrand = |t: f64| {
        let u = seg.t_start + t;
        let z = eval_zeta(Complex64::new(seg.sigma, u), &acc)?;
        Ok(f.eval_with(t, &acc_f)? - g.eval(u)? * z)
    };
    let noise = zeta_rounding_noise(seg.sigma, seg.t_end()) * g.max_abs() + f.rounding_noise();
    match norm {
        Norm::L1 => integrate_abs_with_noise(integrand, 0.0, h, &cfg, noise),
        Norm::Sup => Ok(QuadOutcome {
            value: sup_abs(integrand, 0.0, h, &cfg)?,
            error: 0.0,
            converged: true,
            evaluations: cfg.base_panels * 15 + 2,
        }),
    }
}

/// `∫_0^H |f(t) − G(T+t) ζ(σ + iT + it)| dt`.
pub fn l1_translate_distance(
    f: &TargetFunction,
    seg: &LineSegment,
    g: &WeightFunction,
    cfg: &QuadratureConfig,
) -> Result<QuadOutcome> {
    translate_distance(f, seg, g, cfg, Norm::L1)
}

/// `∫_T^{T+δ} |ζ(σ + it)| dt`.
pub fn short_interval_mean(seg: &LineSegment, cfg: &QuadratureConfig) -> Result<QuadOutcome> {
    seg.validate()?;
    let cfg = cfg.for_window(seg.length, seg.t_end().abs());
    let acc = cfg.zeta_accuracy(seg.length, seg.t_end().abs());
    integrate_abs_with_noise(
        |t| eval_zeta(Complex64::new(seg.sigma, t), &acc),
        seg.t_start,
        seg.t_end(),
        &cfg,
        zeta_rounding_noise(seg.sigma, seg.t_end()),
    )
}
