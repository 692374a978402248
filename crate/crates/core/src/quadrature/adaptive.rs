use super::config::{QuadratureConfig, Rule};
use crate::{par, ComplexValue, Error, Result};

// Gauss–Kronrod 7/15 on [-1, 1]; odd indices of XGK are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const ROUNDOFF: f64 = 50.0 * f64::EPSILON;

/// Result of an adaptive integration. `converged` is false when some panel hit
/// `max_depth` with its local error still above its share of the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutcome {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl QuadOutcome {
    pub fn into_result(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::ToleranceNotMet {
                estimate: self.value,
                error: self.error,
            })
        }
    }

    fn zero() -> Self {
        Self {
            value: 0.0,
            error: 0.0,
            converged: true,
            evaluations: 0,
        }
    }

    fn absorb(&mut self, other: QuadOutcome) {
        self.value += other.value;
        self.error += other.error;
        self.converged &= other.converged;
        self.evaluations += other.evaluations;
    }
}

struct PanelEstimate {
    value: f64,
    error: f64,
    // Nodes in increasing t with the curve values there.
    samples: Vec<(f64, ComplexValue)>,
}

fn finite(t: f64, z: ComplexValue) -> Result<ComplexValue> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::domain(format!("integrand is not finite at t = {t}")))
    }
}

fn kronrod_nodes(lo: f64, hi: f64) -> [f64; 15] {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut t = [0.0; 15];
    for j in 0..7 {
        t[j] = c - h * XGK[j];
        t[14 - j] = c + h * XGK[j];
    }
    t[7] = c;
    t
}

fn gauss_kronrod<F>(curve: &F, lo: f64, hi: f64) -> Result<PanelEstimate>
where
    F: Fn(f64) -> Result<ComplexValue>,
{
    let h = 0.5 * (hi - lo);
    let nodes = kronrod_nodes(lo, hi);
    let mut samples = Vec::with_capacity(15);
    for &t in &nodes {
        samples.push((t, finite(t, curve(t)?)?));
    }
    let abs: Vec<f64> = samples.iter().map(|(_, z)| z.norm()).collect();
    let mut kronrod = WGK[7] * abs[7];
    let mut gauss = WG[3] * abs[7];
    for j in 0..7 {
        let pair = abs[j] + abs[14 - j];
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(PanelEstimate {
        value: h * kronrod,
        error: (h * (kronrod - gauss)).abs(),
        samples,
    })
}

fn simpson<F>(curve: &F, lo: f64, hi: f64) -> Result<PanelEstimate>
where
    F: Fn(f64) -> Result<ComplexValue>,
{
    let w = hi - lo;
    let mut samples = Vec::with_capacity(5);
    for k in 0..5 {
        let t = if k == 4 { hi } else { lo + 0.25 * w * k as f64 };
        samples.push((t, finite(t, curve(t)?)?));
    }
    let a: Vec<f64> = samples.iter().map(|(_, z)| z.norm()).collect();
    let coarse = w / 6.0 * (a[0] + 4.0 * a[2] + a[4]);
    let fine = w / 12.0 * (a[0] + 4.0 * a[1] + 2.0 * a[2] + 4.0 * a[3] + a[4]);
    let diff = fine - coarse;
    Ok(PanelEstimate {
        value: fine + diff / 15.0,
        error: diff.abs() / 15.0,
        samples,
    })
}

fn estimate<F>(curve: &F, lo: f64, hi: f64, rule: Rule) -> Result<PanelEstimate>
where
    F: Fn(f64) -> Result<ComplexValue>,
{
    match rule {
        Rule::GaussKronrod15 => gauss_kronrod(curve, lo, hi),
        Rule::CompositeSimpson => simpson(curve, lo, hi),
    }
}

fn samples_per_panel(rule: Rule) -> usize {
    match rule {
        Rule::GaussKronrod15 => 15,
        Rule::CompositeSimpson => 5,
    }
}

/// Root of `g` in `[a, b]` given opposite signs at the ends.
fn bisect_root<G>(g: G, mut a: f64, mut b: f64, mut ga: f64) -> Result<(f64, usize)>
where
    G: Fn(f64) -> Result<f64>,
{
    let width = b - a;
    let mut evals = 0;
    while b - a > 1e-12 * width.max(f64::MIN_POSITIVE) && evals < 60 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m)?;
        evals += 1;
        if gm == 0.0 {
            return Ok((m, evals));
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    Ok((0.5 * (a + b), evals))
}

fn first_sign_change(samples: &[(f64, ComplexValue)], part: fn(&ComplexValue) -> f64) -> Option<usize> {
    samples.windows(2).position(|w| part(&w[0].1) * part(&w[1].1) < 0.0)
}

/// Interior points at which `|curve|` may have a kink: a near-zero is
/// suspected when Re and Im both change sign on the panel (or Im vanishes
/// identically and Re changes sign). Splits land on the bisected roots of
/// Re and Im so each kink sits on a panel boundary.
fn kink_splits<F>(curve: &F, lo: f64, hi: f64, samples: &[(f64, ComplexValue)]) -> Result<(Vec<f64>, usize)>
where
    F: Fn(f64) -> Result<ComplexValue>,
{
    let re_change = first_sign_change(samples, |z| z.re);
    let im_zero = samples.iter().all(|(_, z)| z.im == 0.0);
    let im_change = first_sign_change(samples, |z| z.im);
    let mut points = Vec::new();
    let mut evals = 0;
    let ok = re_change.is_some() && (im_zero || im_change.is_some());
    if !ok {
        return Ok((points, 0));
    }
    let margin = 1e-6 * (hi - lo);
    let push = |p: f64, points: &mut Vec<f64>| {
        if p > lo + margin && p < hi - margin {
            points.push(p);
        }
    };
    if let Some(i) = re_change {
        let (a, b) = (samples[i].0, samples[i + 1].0);
        let (r, n) = bisect_root(|t| Ok(curve(t)?.re), a, b, samples[i].1.re)?;
        evals += n;
        push(r, &mut points);
    }
    if let (false, Some(i)) = (im_zero, im_change) {
        let (a, b) = (samples[i].0, samples[i + 1].0);
        let (r, n) = bisect_root(|t| Ok(curve(t)?.im), a, b, samples[i].1.im)?;
        evals += n;
        push(r, &mut points);
    }
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() <= margin);
    Ok((points, evals))
}

struct Refiner<'a, F> {
    curve: &'a F,
    cfg: &'a QuadratureConfig,
    density: f64,
    noise: f64,
}

impl<F> Refiner<'_, F>
where
    F: Fn(f64) -> Result<ComplexValue>,
{
    fn refine(&self, lo: f64, hi: f64, depth: usize, est: PanelEstimate, out: &mut QuadOutcome) -> Result<()> {
        // Below ~50 ulp of the panel's magnitude the two-level difference is
        // rounding noise and further splitting cannot reduce it.
        let local_tol = (self.cfg.abs_tol * (hi - lo) * self.density)
            .max(ROUNDOFF * est.value.abs())
            .max(self.noise * (hi - lo));
        if est.error <= local_tol {
            out.absorb(QuadOutcome {
                value: est.value,
                error: est.error,
                converged: true,
                evaluations: 0,
            });
            return Ok(());
        }
        if depth >= self.cfg.max_depth {
            out.absorb(QuadOutcome {
                value: est.value,
                error: est.error,
                converged: false,
                evaluations: 0,
            });
            return Ok(());
        }
        let (mut cuts, evals) = kink_splits(self.curve, lo, hi, &est.samples)?;
        out.evaluations += evals;
        if cuts.is_empty() {
            cuts.push(0.5 * (lo + hi));
        }
        let mut edges = Vec::with_capacity(cuts.len() + 2);
        edges.push(lo);
        edges.extend(cuts);
        edges.push(hi);
        for w in edges.windows(2) {
            let sub = estimate(self.curve, w[0], w[1], self.cfg.rule)?;
            out.evaluations += samples_per_panel(self.cfg.rule);
            self.refine(w[0], w[1], depth + 1, sub, out)?;
        }
        Ok(())
    }
}

/// `∫_a^b |curve(t)| dt` by adaptive Gauss–Kronrod 7/15 (or Simpson) panels.
///
/// `[a, b]` is cut into `cfg.base_panels` equal panels which are refined
/// independently; each panel may use a share of `cfg.abs_tol` proportional to
/// its length. Base panels are processed in parallel and summed in order.
pub fn integrate_abs<F>(curve: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadOutcome>
where
    F: Fn(f64) -> Result<ComplexValue> + Sync + Send,
{
    integrate_abs_with_noise(curve, a, b, cfg, 0.0)
}

/// [`integrate_abs`] for a curve whose values carry absolute rounding noise
/// up to `noise`. A panel of width `w` is accepted once its error estimate is
/// below `noise · w`, since splitting cannot resolve anything finer.
pub fn integrate_abs_with_noise<F>(curve: F, a: f64, b: f64, cfg: &QuadratureConfig, noise: f64) -> Result<QuadOutcome>
where
    F: Fn(f64) -> Result<ComplexValue> + Sync + Send,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::invalid(format!(
            "integration bounds must satisfy a < b, got [{a}, {b}]"
        )));
    }
    let panels = cfg.base_panels;
    let width = (b - a) / panels as f64;
    let edge = |k: usize| if k == panels { b } else { a + width * k as f64 };
    let refiner = Refiner {
        curve: &curve,
        cfg,
        density: 1.0 / (b - a),
        noise: noise.max(0.0),
    };
    let indices: Vec<usize> = (0..panels).collect();
    let parts = par::try_map(&indices, |&k| {
        let (lo, hi) = (edge(k), edge(k + 1));
        let mut out = QuadOutcome::zero();
        let est = estimate(refiner.curve, lo, hi, cfg.rule)?;
        out.evaluations += samples_per_panel(cfg.rule);
        refiner.refine(lo, hi, 0, est, &mut out)?;
        Ok::<_, Error>(out)
    })?;
    let mut total = QuadOutcome::zero();
    for p in parts {
        total.absorb(p);
    }
    Ok(total)
}

/// `max |curve(t)|` over the quadrature grid of `[a, b]`: the endpoints and
/// the Kronrod nodes of every base panel.
pub fn sup_abs<F>(curve: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<ComplexValue> + Sync + Send,
{
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::invalid(format!("sup bounds must satisfy a < b, got [{a}, {b}]")));
    }
    let panels = cfg.base_panels;
    let width = (b - a) / panels as f64;
    let mut points = vec![a, b];
    for k in 0..panels {
        let lo = a + width * k as f64;
        let hi = if k + 1 == panels { b } else { lo + width };
        points.extend(kronrod_nodes(lo, hi));
    }
    let values = par::try_map(&points, |&t| Ok::<_, Error>(finite(t, curve(t)?)?.norm()))?;
    Ok(values.into_iter().fold(0.0, f64::max))
}
