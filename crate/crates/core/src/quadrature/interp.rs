use num_complex::Complex64;

use crate::{ComplexValue, Error, Result};

/// Complex samples on a strictly increasing grid, interpolated by monotone
/// piecewise-cubic Hermite (PCHIP) curves on the real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    t: Vec<f64>,
    values: Vec<ComplexValue>,
    slopes_re: Vec<f64>,
    slopes_im: Vec<f64>,
}

impl SampledCurve {
    pub fn new(t: Vec<f64>, values: Vec<ComplexValue>) -> Result<Self> {
        if t.len() != values.len() {
            return Err(Error::invalid(format!(
                "sample grid has {} abscissae but {} values",
                t.len(),
                values.len()
            )));
        }
        if t.len() < 2 {
            return Err(Error::invalid("a sampled curve needs at least two samples"));
        }
        if let Some(bad) = t.iter().position(|x| !x.is_finite()) {
            return Err(Error::invalid(format!("sample abscissa {bad} is not finite")));
        }
        if let Some(bad) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid(format!("sample value {bad} is not finite")));
        }
        if let Some(k) = t.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!(
                "sample abscissae must be strictly increasing (t[{}] = {} >= t[{}] = {})",
                k,
                t[k],
                k + 1,
                t[k + 1]
            )));
        }
        let re: Vec<f64> = values.iter().map(|z| z.re).collect();
        let im: Vec<f64> = values.iter().map(|z| z.im).collect();
        Ok(Self {
            slopes_re: pchip_slopes(&t, &re),
            slopes_im: pchip_slopes(&t, &im),
            t,
            values,
        })
    }

    pub fn from_real(t: Vec<f64>, values: &[f64]) -> Result<Self> {
        Self::new(t, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn span(&self) -> (f64, f64) {
        (self.t[0], self.t[self.t.len() - 1])
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[ComplexValue] {
        &self.values
    }

    /// Whether `[a, b]` lies inside the sampled span (with a relative slack of 1e-12).
    pub fn covers(&self, a: f64, b: f64) -> bool {
        let (lo, hi) = self.span();
        let slack = 1e-12 * lo.abs().max(hi.abs()).max(1.0);
        a >= lo - slack && b <= hi + slack
    }

    pub fn eval(&self, x: f64) -> Result<ComplexValue> {
        if !self.covers(x, x) || !x.is_finite() {
            let (lo, hi) = self.span();
            return Err(Error::domain(format!("t = {x} outside sampled range [{lo}, {hi}]")));
        }
        let n = self.t.len();
        let k = match self.t.partition_point(|&v| v <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let (x0, x1) = (self.t[k], self.t[k + 1]);
        let h = x1 - x0;
        let s = ((x - x0) / h).clamp(0.0, 1.0);
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let re = hermite(s, h, y0.re, y1.re, self.slopes_re[k], self.slopes_re[k + 1]);
        let im = hermite(s, h, y0.im, y1.im, self.slopes_im[k], self.slopes_im[k + 1]);
        Ok(Complex64::new(re, im))
    }
}

fn hermite(s: f64, h: f64, y0: f64, y1: f64, d0: f64, d1: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

/// Fritsch–Carlson slopes with the one-sided three-point end rule.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        if a * b > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / a + w2 / b);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() || m0 == 0.0 {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}
