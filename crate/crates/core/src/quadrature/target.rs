use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::adaptive::{integrate_abs_with_noise, QuadOutcome};
use super::config::QuadratureConfig;
use super::interp::SampledCurve;
use crate::special::{eval_zeta, zeta_rounding_noise, EvalAccuracy};
use crate::{ComplexValue, Error, Result};

/// Magnitude below which a target value counts as zero (its phase is undefined).
pub const TARGET_ZERO: f64 = 1e-14;
const REAL_THRESHOLD: f64 = 1e-12;
const CHECK_POINTS: usize = 257;

/// Vertical window `σ + i[T, T + length]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineSegment {
    pub sigma: f64,
    pub t_start: f64,
    pub length: f64,
}

impl LineSegment {
    pub fn new(sigma: f64, t_start: f64, length: f64) -> Result<Self> {
        let seg = Self { sigma, t_start, length };
        seg.validate()?;
        Ok(seg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.t_start.is_finite() && self.length.is_finite()) {
            return Err(Error::invalid("line segment fields must be finite"));
        }
        if self.length <= 0.0 {
            return Err(Error::invalid(format!(
                "segment length must be positive, got {}",
                self.length
            )));
        }
        if self.sigma == 1.0 && self.t_start < 2.0 {
            return Err(Error::invalid(format!(
                "on sigma = 1 the segment must start at t >= 2, got {}",
                self.t_start
            )));
        }
        Ok(())
    }

    pub fn t_end(&self) -> f64 {
        self.t_start + self.length
    }

    /// Same line and length, shifted to start at `t_start`.
    pub fn at(&self, t_start: f64) -> Result<Self> {
        Self::new(self.sigma, t_start, self.length)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TargetKind {
    Constant(ComplexValue),
    /// Coefficients `c0, c1, ...` of `c0 + c1 t + ...`.
    Polynomial(Vec<ComplexValue>),
    /// `t ↦ ζ(σ + i(t0 + t))`.
    ZetaTranslate {
        sigma: f64,
        t0: f64,
    },
    /// `t ↦ |ζ(1/2 + i(t0 + t))|`.
    AbsZetaTranslate {
        t0: f64,
    },
    Sampled(SampledCurve),
}

/// A complex function on `[0, H]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetFunction {
    kind: TargetKind,
    domain_length: f64,
}

impl TargetFunction {
    pub fn new(kind: TargetKind, domain_length: f64) -> Result<Self> {
        if !(domain_length.is_finite() && domain_length > 0.0) {
            return Err(Error::invalid(format!(
                "target domain length must be positive, got {domain_length}"
            )));
        }
        match &kind {
            TargetKind::Constant(c) if !(c.re.is_finite() && c.im.is_finite()) => {
                return Err(Error::invalid("constant target must be finite"));
            }
            TargetKind::Polynomial(cs)
                if cs.is_empty() || cs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) =>
            {
                return Err(Error::invalid("polynomial target needs finite coefficients"));
            }
            TargetKind::ZetaTranslate { sigma, t0 } => {
                LineSegment::new(*sigma, *t0, domain_length)?;
            }
            TargetKind::AbsZetaTranslate { t0 } => {
                LineSegment::new(0.5, *t0, domain_length)?;
            }
            TargetKind::Sampled(curve) => {
                let (lo, hi) = curve.span();
                let slack = 1e-12 * domain_length.max(1.0);
                if lo.abs() > slack || (hi - domain_length).abs() > slack {
                    return Err(Error::invalid(format!(
                        "sampled target must span exactly [0, {domain_length}], got [{lo}, {hi}]"
                    )));
                }
            }
            _ => {}
        }
        Ok(Self { kind, domain_length })
    }

    pub fn constant(c: ComplexValue, h: f64) -> Result<Self> {
        Self::new(TargetKind::Constant(c), h)
    }

    pub fn real_constant(c: f64, h: f64) -> Result<Self> {
        Self::constant(Complex64::new(c, 0.0), h)
    }

    pub fn zero(h: f64) -> Result<Self> {
        Self::real_constant(0.0, h)
    }

    pub fn polynomial(coefficients: &[f64], h: f64) -> Result<Self> {
        let cs = coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        Self::new(TargetKind::Polynomial(cs), h)
    }

    pub fn zeta_translate(sigma: f64, t0: f64, h: f64) -> Result<Self> {
        Self::new(TargetKind::ZetaTranslate { sigma, t0 }, h)
    }

    pub fn abs_zeta_translate(t0: f64, h: f64) -> Result<Self> {
        Self::new(TargetKind::AbsZetaTranslate { t0 }, h)
    }

    pub fn sampled(curve: SampledCurve, h: f64) -> Result<Self> {
        Self::new(TargetKind::Sampled(curve), h)
    }

    /// Parses the built-in grammar `const:<re>[,<im>]`, `poly:<c0>,<c1>,...`,
    /// `zeta:<sigma>,<T0>` and `abszeta:<T0>`.
    pub fn parse_builtin(spec: &str, h: f64) -> Result<Self> {
        let (name, args) = spec
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("target '{spec}' is not of the form <kind>:<args>")))?;
        let nums: Vec<f64> = args
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::invalid(format!("target '{spec}': '{a}' is not a number")))
            })
            .collect::<Result<_>>()?;
        let arity = |ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(Error::invalid(format!("target '{spec}': wrong number of arguments")))
            }
        };
        match name.trim() {
            "const" => {
                arity(nums.len() <= 2)?;
                Self::constant(Complex64::new(nums[0], nums.get(1).copied().unwrap_or(0.0)), h)
            }
            "poly" => Self::polynomial(&nums, h),
            "zeta" => {
                arity(nums.len() == 2)?;
                Self::zeta_translate(nums[0], nums[1], h)
            }
            "abszeta" => {
                arity(nums.len() == 1)?;
                Self::abs_zeta_translate(nums[0], h)
            }
            other => Err(Error::invalid(format!("unknown target kind '{other}'"))),
        }
    }

    /// Parses CSV text with columns `t,re,im` (an optional header line is
    /// skipped) into a sampled target on `[0, h]`.
    pub fn from_csv(text: &str, h: f64) -> Result<Self> {
        let mut t = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
            match parsed {
                Ok(v) if v.len() == 3 => {
                    t.push(v[0]);
                    values.push(Complex64::new(v[1], v[2]));
                }
                Ok(_) => {
                    return Err(Error::invalid(format!(
                        "target CSV line {}: expected 3 columns t,re,im",
                        lineno + 1
                    )))
                }
                Err(_) if t.is_empty() && lineno == 0 => continue,
                Err(_) => return Err(Error::invalid(format!("target CSV line {}: not numeric", lineno + 1))),
            }
        }
        Self::sampled(SampledCurve::new(t, values)?, h)
    }

    pub fn kind(&self) -> &TargetKind {
        &self.kind
    }

    pub fn domain_length(&self) -> f64 {
        self.domain_length
    }

    /// Height at which the target lives (non-zero only for zeta translates);
    /// used to size quadrature panels.
    pub fn height(&self) -> f64 {
        match self.kind {
            TargetKind::ZetaTranslate { t0, .. } | TargetKind::AbsZetaTranslate { t0 } => t0.abs(),
            _ => 0.0,
        }
    }

    /// Short textual form; matches the built-in grammar where one applies.
    pub fn describe(&self) -> String {
        match &self.kind {
            TargetKind::Constant(c) if c.im == 0.0 => format!("const:{}", c.re),
            TargetKind::Constant(c) => format!("const:{},{}", c.re, c.im),
            TargetKind::Polynomial(cs) => {
                let parts: Vec<String> = cs
                    .iter()
                    .map(|c| {
                        if c.im == 0.0 {
                            format!("{}", c.re)
                        } else {
                            format!("{}{:+}i", c.re, c.im)
                        }
                    })
                    .collect();
                format!("poly:{}", parts.join(","))
            }
            TargetKind::ZetaTranslate { sigma, t0 } => format!("zeta:{sigma},{t0}"),
            TargetKind::AbsZetaTranslate { t0 } => format!("abszeta:{t0}"),
            TargetKind::Sampled(c) => format!("sampled:{}", c.abscissae().len()),
        }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        let slack = 1e-12 * self.domain_length.max(1.0);
        if t.is_finite() && t >= -slack && t <= self.domain_length + slack {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "target evaluated at t = {t} outside [0, {}]",
                self.domain_length
            )))
        }
    }

    /// `f(t)` with zeta translates evaluated to the default accuracy for their height.
    pub fn eval(&self, t: f64) -> Result<ComplexValue> {
        let acc = EvalAccuracy::for_height(self.height() + self.domain_length);
        self.eval_with(t, &acc)
    }

    /// `f(t)` with zeta translates evaluated to `acc`.
    pub fn eval_with(&self, t: f64, acc: &EvalAccuracy) -> Result<ComplexValue> {
        self.check_domain(t)?;
        let t = t.clamp(0.0, self.domain_length);
        match &self.kind {
            TargetKind::Constant(c) => Ok(*c),
            TargetKind::Polynomial(cs) => Ok(cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c)),
            TargetKind::ZetaTranslate { sigma, t0 } => eval_zeta(Complex64::new(*sigma, t0 + t), acc),
            TargetKind::AbsZetaTranslate { t0 } => {
                Ok(Complex64::new(eval_zeta(Complex64::new(0.5, t0 + t), acc)?.norm(), 0.0))
            }
            TargetKind::Sampled(curve) => curve.eval(t),
        }
    }

    /// Points at which the structural predicates are checked: the sample
    /// abscissae and interval midpoints for sampled targets, a uniform grid
    /// otherwise.
    pub fn check_grid(&self) -> Vec<f64> {
        match &self.kind {
            TargetKind::Sampled(curve) => {
                let t = curve.abscissae();
                let mut out = Vec::with_capacity(2 * t.len());
                for w in t.windows(2) {
                    out.push(w[0]);
                    out.push(0.5 * (w[0] + w[1]));
                }
                out.push(t[t.len() - 1]);
                out
            }
            _ => (0..CHECK_POINTS)
                .map(|k| self.domain_length * k as f64 / (CHECK_POINTS - 1) as f64)
                .collect(),
        }
    }

    fn grid_values(&self) -> Result<Vec<ComplexValue>> {
        self.check_grid().into_iter().map(|t| self.eval(t)).collect()
    }

    /// True iff `max |Im f| ≤ 1e-12` over [`Self::check_grid`].
    pub fn is_real_valued(&self) -> Result<bool> {
        match &self.kind {
            TargetKind::AbsZetaTranslate { .. } => return Ok(true),
            TargetKind::Constant(c) => return Ok(c.im.abs() <= REAL_THRESHOLD),
            _ => {}
        }
        Ok(self.grid_values()?.iter().all(|z| z.im.abs() <= REAL_THRESHOLD))
    }

    /// Real-valued and `Re f ≥ -1e-12` over the check grid.
    pub fn is_nonnegative(&self) -> Result<bool> {
        if let TargetKind::AbsZetaTranslate { .. } = self.kind {
            return Ok(true);
        }
        Ok(self
            .grid_values()?
            .iter()
            .all(|z| z.im.abs() <= REAL_THRESHOLD && z.re >= -REAL_THRESHOLD))
    }

    /// `|f| ≤ 1e-14` everywhere on the check grid.
    pub fn is_identically_zero(&self) -> Result<bool> {
        match &self.kind {
            TargetKind::Constant(c) => Ok(c.norm() <= TARGET_ZERO),
            TargetKind::Polynomial(cs) => Ok(cs.iter().all(|c| c.norm() == 0.0)),
            TargetKind::ZetaTranslate { .. } | TargetKind::AbsZetaTranslate { .. } => Ok(false),
            TargetKind::Sampled(_) => Ok(self.grid_values()?.iter().all(|z| z.norm() <= TARGET_ZERO)),
        }
    }

    /// `∫_0^H |f(t)| dt`.
    pub fn abs_integral(&self, cfg: &QuadratureConfig) -> Result<QuadOutcome> {
        let h = self.domain_length;
        let cfg = cfg.for_window(h, self.height());
        let acc = cfg.zeta_accuracy(h, self.height() + h);
        integrate_abs_with_noise(|t| self.eval_with(t, &acc), 0.0, h, &cfg, self.rounding_noise())
    }

    /// Rounding noise of the target's values (non-zero only for zeta translates).
    pub fn rounding_noise(&self) -> f64 {
        match self.kind {
            TargetKind::ZetaTranslate { sigma, t0 } => zeta_rounding_noise(sigma, t0 + self.domain_length),
            TargetKind::AbsZetaTranslate { t0 } => zeta_rounding_noise(0.5, t0 + self.domain_length),
            _ => 0.0,
        }
    }
}

/// The weight `G` multiplying the zeta translate, indexed by absolute height.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum WeightFunction {
    #[default]
    Unit,
    SampledReal(SampledCurve),
    SampledComplex(SampledCurve),
}

impl WeightFunction {
    pub fn sampled_real(t: Vec<f64>, values: &[f64]) -> Result<Self> {
        Ok(Self::SampledReal(SampledCurve::from_real(t, values)?))
    }

    pub fn sampled_complex(curve: SampledCurve) -> Self {
        Self::SampledComplex(curve)
    }

    /// Parses `unit` or CSV text `t,re[,im]`; a third column makes the weight complex.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut t = Vec::new();
        let mut values = Vec::new();
        let mut complex = false;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parsed: std::result::Result<Vec<f64>, _> = line.split(',').map(|f| f.trim().parse::<f64>()).collect();
            match parsed {
                Ok(v) if v.len() == 2 || v.len() == 3 => {
                    t.push(v[0]);
                    let im = v.get(2).copied().unwrap_or(0.0);
                    complex |= v.len() == 3 && im != 0.0;
                    values.push(Complex64::new(v[1], im));
                }
                Ok(_) => {
                    return Err(Error::invalid(format!(
                        "weight CSV line {}: expected t,re[,im]",
                        lineno + 1
                    )))
                }
                Err(_) if t.is_empty() && lineno == 0 => continue,
                Err(_) => return Err(Error::invalid(format!("weight CSV line {}: not numeric", lineno + 1))),
            }
        }
        let curve = SampledCurve::new(t, values)?;
        Ok(if complex {
            Self::SampledComplex(curve)
        } else {
            Self::SampledReal(curve)
        })
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Self::Unit)
    }

    pub fn is_real(&self) -> bool {
        !matches!(self, Self::SampledComplex(_))
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Unit => "unit".into(),
            Self::SampledReal(c) => format!("sampled-real:{}", c.abscissae().len()),
            Self::SampledComplex(c) => format!("sampled-complex:{}", c.abscissae().len()),
        }
    }

    /// Fails unless `G` is defined on the whole height range `[a, b]`.
    pub fn check_covers(&self, a: f64, b: f64) -> Result<()> {
        match self {
            Self::Unit => Ok(()),
            Self::SampledReal(c) | Self::SampledComplex(c) => {
                if c.covers(a, b) {
                    Ok(())
                } else {
                    let (lo, hi) = c.span();
                    Err(Error::invalid(format!(
                        "weight samples [{lo}, {hi}] do not cover heights [{a}, {b}]"
                    )))
                }
            }
        }
    }

    /// Largest sample modulus (1 for the unit weight).
    pub fn max_abs(&self) -> f64 {
        match self {
            Self::Unit => 1.0,
            Self::SampledReal(c) | Self::SampledComplex(c) => c.values().iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }

    pub fn eval(&self, t: f64) -> Result<ComplexValue> {
        match self {
            Self::Unit => Ok(Complex64::new(1.0, 0.0)),
            Self::SampledReal(c) => Ok(Complex64::new(c.eval(t)?.re, 0.0)),
            Self::SampledComplex(c) => c.eval(t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_validation() {
        assert!(LineSegment::new(0.5, 100.0, 0.0).is_err());
        assert!(LineSegment::new(1.0, 1.0, 1.0).is_err());
        assert!(LineSegment::new(1.0, 2.0, 1.0).is_ok());
        assert!(LineSegment::new(f64::NAN, 2.0, 1.0).is_err());
    }

    #[test]
    fn builtin_grammar() {
        let c = TargetFunction::parse_builtin("const:1", 1.0).unwrap();
        assert_eq!(c.eval(0.5).unwrap(), Complex64::new(1.0, 0.0));
        let c = TargetFunction::parse_builtin("const:1,-2", 1.0).unwrap();
        assert_eq!(c.eval(0.0).unwrap(), Complex64::new(1.0, -2.0));
        let p = TargetFunction::parse_builtin("poly:1,-1", 1.0).unwrap();
        assert_eq!(p.eval(0.25).unwrap().re, 0.75);
        assert_eq!(p.describe(), "poly:1,-1");
        let z = TargetFunction::parse_builtin("zeta:0.5,500", 1.0).unwrap();
        assert_eq!(z.describe(), "zeta:0.5,500");
        assert!(TargetFunction::parse_builtin("abszeta:500", 1.0)
            .unwrap()
            .is_nonnegative()
            .unwrap());
        assert!(TargetFunction::parse_builtin("const", 1.0).is_err());
        assert!(TargetFunction::parse_builtin("sin:1", 1.0).is_err());
        assert!(TargetFunction::parse_builtin("zeta:0.5", 1.0).is_err());
        assert!(TargetFunction::parse_builtin("const:x", 1.0).is_err());
    }

    #[test]
    fn domain_is_enforced() {
        let c = TargetFunction::real_constant(1.0, 1.0).unwrap();
        assert!(c.eval(1.0 + 1e-15).is_ok());
        assert!(c.eval(1.1).is_err());
        assert!(c.eval(-0.1).is_err());
        assert!(TargetFunction::real_constant(1.0, 0.0).is_err());
    }

    #[test]
    fn realness_predicates() {
        assert!(TargetFunction::polynomial(&[1.0, -1.0], 1.0)
            .unwrap()
            .is_real_valued()
            .unwrap());
        assert!(!TargetFunction::polynomial(&[1.0, -1.0], 2.0)
            .unwrap()
            .is_nonnegative()
            .unwrap());
        assert!(TargetFunction::polynomial(&[1.0, -1.0], 1.0)
            .unwrap()
            .is_nonnegative()
            .unwrap());
        let c = TargetFunction::constant(Complex64::new(1.0, 1e-13), 1.0).unwrap();
        assert!(c.is_real_valued().unwrap());
        let c = TargetFunction::constant(Complex64::new(1.0, 1e-11), 1.0).unwrap();
        assert!(!c.is_real_valued().unwrap());
        assert!(!TargetFunction::zeta_translate(0.5, 100.0, 1.0)
            .unwrap()
            .is_real_valued()
            .unwrap());
        assert!(TargetFunction::zero(1.0).unwrap().is_identically_zero().unwrap());
    }

    #[test]
    fn csv_targets() {
        let text = "t,re,im\n0,1,0\n0.5,2,0\n1,1,0\n";
        let f = TargetFunction::from_csv(text, 1.0).unwrap();
        assert!(f.is_real_valued().unwrap());
        assert_eq!(f.eval(0.5).unwrap().re, 2.0);
        assert!(TargetFunction::from_csv(text, 2.0).is_err());
        assert!(TargetFunction::from_csv("0,1,0\n0.6,1,0\n0.5,1,0\n1,1,0\n", 1.0).is_err());
        assert!(TargetFunction::from_csv("0,1\n1,1\n", 1.0).is_err());
    }

    #[test]
    fn weights() {
        let g = WeightFunction::from_csv("t,re\n100,1\n200,3\n").unwrap();
        assert!(g.is_real());
        assert!(g.check_covers(120.0, 130.0).is_ok());
        assert!(g.check_covers(190.0, 210.0).is_err());
        assert_eq!(g.eval(150.0).unwrap().re, 2.0);
        let g = WeightFunction::from_csv("100,1,1\n200,3,1\n").unwrap();
        assert!(!g.is_real());
    }

    #[test]
    fn abs_integral_of_linear() {
        let f = TargetFunction::polynomial(&[1.0, -1.0], 2.0).unwrap();
        let cfg = QuadratureConfig::default().with_tol(1e-12);
        assert!((f.abs_integral(&cfg).unwrap().value - 1.0).abs() < 1e-12);
    }
}
