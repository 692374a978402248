use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use super::record::{ExperimentRecord, RecordBuilder};
use crate::quadrature::{short_interval_mean, LineSegment, QuadratureConfig};
use crate::special::{eval_zeta, zeta_on_vertical_grid, EvalAccuracy};
use crate::{par, Complex64, Error, Result};

/// Grid step used to certify the modulus bound `M` on the rectangle.
pub const M_GRID_STEP: f64 = 0.05;
/// Safety factor applied to the sampled maximum.
pub const M_SAFETY: f64 = 1.05;

/// Rectangle, abscissae and constants of the three-line convexity inequality.
/// All integrals are centred at the same height `t0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityParams {
    pub a: f64,
    pub b: f64,
    pub t0: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub sigma0: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    #[serde(rename = "A")]
    pub big_a: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub r: u32,
    #[serde(rename = "M")]
    pub m: f64,
    /// Window length the parameters were derived from, when they come from
    /// [`lemma1_parameters`].
    pub delta: Option<f64>,
}

impl ConvexityParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.a,
            self.b,
            self.t0,
            self.h,
            self.d,
            self.sigma0,
            self.sigma1,
            self.sigma2,
            self.big_a,
            self.c,
            self.m,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("convexity parameters must be finite"));
        }
        if !(self.a <= self.sigma0 && self.sigma0 < self.sigma1 && self.sigma1 < self.sigma2 && self.sigma2 <= self.b) {
            return Err(Error::invalid(format!(
                "need a <= sigma0 < sigma1 < sigma2 <= b, got {} <= {} < {} < {} <= {}",
                self.a, self.sigma0, self.sigma1, self.sigma2, self.b
            )));
        }
        if !(self.d > 0.0 && 2.0 * self.d <= self.h * (1.0 + 1e-12)) {
            return Err(Error::invalid(format!(
                "need 0 < 2D <= H, got D = {}, H = {}",
                self.d, self.h
            )));
        }
        if self.r < 1 || self.c <= 0.0 || self.big_a <= 0.0 || self.m <= 0.0 {
            return Err(Error::invalid("need r >= 1, C > 0, A > 0 and M > 0"));
        }
        Ok(())
    }

    pub fn at_height(mut self, t0: f64) -> Self {
        self.t0 = t0;
        self
    }

    /// The lemma's shape: `σ1 = 2`, `σ2 = 4 − σ0`, `σ0 ≥ 1/2`.
    fn lemma_shape(&self) -> bool {
        self.sigma0 >= 0.5 && self.sigma1 == 2.0 && (self.sigma2 - (4.0 - self.sigma0)).abs() < 1e-12
    }
}

/// Parameters of the short-interval lower bound: `σ0 = σ`, `σ1 = 2`,
/// `σ2 = 4 − σ`, `D = min(δ/4, 2/3)`, `H = 2D`, `C = 2δ/e` and
/// `r = ⌈(A + 3) log M − (log δ)/2⌉`. The height `t0` starts at zero; set it
/// with [`ConvexityParams::at_height`].
pub fn lemma1_parameters(sigma: f64, delta: f64, m: f64, big_a: f64) -> Result<ConvexityParams> {
    if !(0.5..=1.0).contains(&sigma) {
        return Err(Error::domain(format!("sigma must lie in [1/2, 1], got {sigma}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::invalid(format!("delta must be positive, got {delta}")));
    }
    if !(m > 1.0 && m.is_finite()) {
        return Err(Error::invalid(format!("M must exceed 1, got {m}")));
    }
    if !(big_a > 0.0 && big_a.is_finite()) {
        return Err(Error::invalid(format!("A must be positive, got {big_a}")));
    }
    let d = (delta / 4.0).min(2.0 / 3.0);
    // The small guard keeps exact integers (e.g. log e^10 = 10) from ceiling upwards.
    let raw = (big_a + 3.0) * m.ln() - delta.ln() / 2.0;
    let r = (raw - 1e-9).ceil().max(1.0);
    if r > u32::MAX as f64 {
        return Err(Error::invalid("r overflows"));
    }
    Ok(ConvexityParams {
        a: sigma,
        b: 4.0 - sigma,
        t0: 0.0,
        h: 2.0 * d,
        d,
        sigma0: sigma,
        sigma1: 2.0,
        sigma2: 4.0 - sigma,
        big_a,
        c: 2.0 * delta / E,
        r: r as u32,
        m,
        delta: Some(delta),
    })
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}

fn log_plus(x: f64) -> f64 {
    x.ln().max(0.0)
}

/// `1.05 ×` the max of `|ζ|` over a 0.05-step grid on the rectangle.
pub fn certified_modulus_bound(a: f64, b: f64, t_lo: f64, t_hi: f64) -> Result<f64> {
    let ns = ((b - a) / M_GRID_STEP).ceil().max(1.0) as usize;
    let nt = ((t_hi - t_lo) / M_GRID_STEP).ceil().max(1.0) as usize;
    let sigmas: Vec<f64> = (0..=ns)
        .map(|k| if k == ns { b } else { a + (b - a) * k as f64 / ns as f64 })
        .collect();
    let step = (t_hi - t_lo) / nt as f64;
    let acc = EvalAccuracy::for_height(t_lo.abs().max(t_hi.abs()));
    let maxima = par::try_map(&sigmas, |&s| {
        let column = zeta_on_vertical_grid(s, t_lo, step, nt + 1, &acc)?;
        Ok::<_, Error>(column.iter().map(|z| z.norm()).fold(0.0, f64::max))
    })?;
    Ok(M_SAFETY * maxima.into_iter().fold(0.0, f64::max))
}

/// Both sides of the convexity inequality for `f = ζ` on the rectangle
/// `[a, b] × [t0 − H, t0 + H]`, evaluated in log space, plus the simplified
/// form and anchor bounds used for the short-interval lemma.
pub fn convexity_check(params: &ConvexityParams, cfg: &QuadratureConfig) -> Result<ExperimentRecord> {
    params.validate()?;
    cfg.validate()?;
    let p = *params;
    if p.a <= 1.0 && 1.0 <= p.b && p.t0 - p.h <= 0.0 && 0.0 <= p.t0 + p.h {
        return Err(Error::InvalidRectangle(format!(
            "[{}, {}] x [{}, {}] contains the pole s = 1",
            p.a,
            p.b,
            p.t0 - p.h,
            p.t0 + p.h
        )));
    }
    let mut rec = RecordBuilder::new("convexity_check");
    rec.input("params", p).input("quadrature", cfg);

    let m_cert = certified_modulus_bound(p.a, p.b, p.t0 - p.h, p.t0 + p.h)?;
    let m = p.m.max(m_cert);

    let seg = |s: f64, half: f64| LineSegment::new(s, p.t0 - half, 2.0 * half);
    let j_out = short_interval_mean(&seg(p.sigma1, p.d)?, cfg)?;
    let i0_out = short_interval_mean(&seg(p.sigma0, 2.0 * p.d)?, cfg)?;
    let i2_out = short_interval_mean(&seg(p.sigma2, 2.0 * p.d)?, cfg)?;
    let j = 2.0 * PI * j_out.value;
    let (i0, i2) = (i0_out.value, i2_out.value);
    let lhs = 2.0 * PI * j;

    let span = p.sigma2 - p.sigma0;
    let ex0 = (p.sigma2 - p.sigma1) / span;
    let ex2 = (p.sigma1 - p.sigma0) / span;
    let kappa = p.c * (p.sigma2 - p.sigma1) * (p.sigma1 - p.sigma0) / span;
    let l0 = 1.0 + log_plus(p.d / (p.sigma1 - p.sigma0));
    let l2 = 1.0 + log_plus(p.d / (p.sigma2 - p.sigma1));
    let ln_m = m.ln();
    let r = p.r as f64;
    let m_neg_a = (-p.big_a * ln_m).exp();
    let log_term1 = 4f64.ln() + ex0 * (i0 * l0).ln() + ex2 * (i2 * l2 + m_neg_a).ln() + kappa * r;
    let log_term2 = 4f64.ln()
        + (p.big_a + 2.0) * ln_m
        + (p.sigma2 - p.sigma1).ln()
        + ex0 * l0.ln()
        + r * ((2.0 / (p.c * p.d)).ln() + kappa);
    let log_rhs = log_sum_exp(log_term1, log_term2);

    rec.computed("J_sigma1", j)
        .computed("I_sigma0", i0)
        .computed("I_sigma2", i2)
        .computed("M_certified", m_cert)
        .computed("M_used", m)
        .computed("lhs", lhs)
        .computed("log_lhs", lhs.ln())
        .computed("log_rhs", log_rhs)
        .computed("rhs", log_rhs.exp())
        .computed("log_rhs_term1", log_term1)
        .computed("log_rhs_term2", log_term2)
        .computed("C_alt_D_over_2e", p.d / (2.0 * E))
        .check(
            "integrals_converged",
            j_out.converged && i0_out.converged && i2_out.converged,
        )
        .check("theorem", lhs.ln() <= log_rhs);

    if p.lemma_shape() {
        let delta = 4.0 * p.d;
        let s1 = 4f64.ln() + 0.5 * (i0 * (i2 + m_neg_a)).ln() + 3.0 * p.c * r / 8.0;
        let s2 = 6f64.ln() + (p.big_a + 2.0) * ln_m + r * ((2.0 / (p.c * p.d)).ln() + 3.0 * p.c / 8.0);
        let log_simplified = log_sum_exp(s1, s2);
        let zeta4 = PI.powi(4) / 90.0;
        let zeta72 = eval_zeta(Complex64::new(3.5, 0.0), &EvalAccuracy::default())?.re;
        let anchor_j = 12.0 * zeta4 * delta;
        rec.computed("log_rhs_simplified", log_simplified)
            .computed("sqrt_I_sigma2", i2.sqrt())
            .reference("anchor_J", anchor_j)
            .reference("sqrt_zeta72_delta", (zeta72 * delta).sqrt())
            .reference("one_and_half_sqrt_delta", 1.5 * delta.sqrt())
            .check("simplified", lhs.ln() <= log_simplified)
            .check("anchor_J", lhs >= anchor_j * (1.0 - 1e-12))
            .check("anchor_I_sigma2", i2.sqrt() < 1.5 * delta.sqrt());
        // |ζ(σ2 + it)| ≤ ζ(7/2) is only guaranteed for σ2 ≥ 7/2.
        if p.sigma2 >= 3.5 {
            rec.check("anchor_I_sigma2_zeta72", i2.sqrt() <= (zeta72 * delta).sqrt());
        }

        // (2√δ − M^{A+2}/√δ · (2/(CD))^r) e^{−3Cr/4} ≤ √I(σ0); the subtracted
        // term is astronomically large, so it is recorded through its log.
        let log_sub = (p.big_a + 2.0) * ln_m - 0.5 * delta.ln() + r * (2.0 / (p.c * p.d)).ln();
        let damp = -3.0 * p.c * r / 4.0;
        let first = 2.0 * delta.sqrt();
        let chain_lhs = (first - log_sub.exp()) * damp.exp();
        rec.computed("chain_rhs", i0.sqrt())
            .computed("chain_subtracted_log", log_sub)
            .computed("chain_damping_log", damp)
            .computed("chain_lhs", chain_lhs)
            .flag("chain_holds", chain_lhs <= i0.sqrt());
    }
    Ok(rec.finish())
}
