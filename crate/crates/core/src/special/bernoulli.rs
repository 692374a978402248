//! Even-index Bernoulli numbers through `B_{2k} = (-1)^{k+1} 2 (2k)! ζ(2k) / (2π)^{2k}`.

use std::f64::consts::PI;
use std::sync::OnceLock;

pub(crate) const MAX_K: usize = 40;

struct Tables {
    /// `B_{2k} / (2k)!`, index `k - 1`.
    ratio: [f64; MAX_K],
    /// `B_{2k}`, index `k - 1`; only the first 20 are kept finite-friendly.
    value: [f64; 20],
}

fn zeta_even(k: usize) -> f64 {
    match k {
        1 => PI * PI / 6.0,
        2 => PI.powi(4) / 90.0,
        _ => {
            // Tail beyond n = 2000 is below 2000^{1-2k} < 1e-16 for k >= 3.
            let s = 2 * k as i32;
            (1..=2000u32).rev().map(|n| (n as f64).powi(-s)).sum()
        }
    }
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut ratio = [0.0; MAX_K];
        let mut value = [0.0; 20];
        let two_pi = 2.0 * PI;
        let mut factorial = 1.0f64;
        for k in 1..=MAX_K {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            ratio[k - 1] = sign * 2.0 * zeta_even(k) / two_pi.powi(2 * k as i32);
            factorial *= ((2 * k - 1) * (2 * k)) as f64;
            if k <= value.len() {
                value[k - 1] = ratio[k - 1] * factorial;
            }
        }
        Tables { ratio, value }
    })
}

/// `B_{2k} / (2k)!` for `1 <= k <= MAX_K`.
pub(crate) fn bernoulli_ratio(k: usize) -> f64 {
    tables().ratio[k - 1]
}

/// `B_{2k}` for `1 <= k <= 20`.
pub(crate) fn bernoulli_2k(k: usize) -> f64 {
    tables().value[k - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_exact_rationals() {
        let exact = [
            (1, 1.0 / 6.0),
            (2, -1.0 / 30.0),
            (3, 1.0 / 42.0),
            (4, -1.0 / 30.0),
            (5, 5.0 / 66.0),
            (6, -691.0 / 2730.0),
            (7, 7.0 / 6.0),
            (8, -3617.0 / 510.0),
            (10, -174611.0 / 330.0),
            (13, 8553103.0 / 6.0),
        ];
        for (k, b) in exact {
            let got = bernoulli_2k(k);
            assert!(((got - b) / b).abs() < 1e-14, "B_{} = {got}, want {b}", 2 * k);
        }
    }

    #[test]
    fn ratio_decays_like_two_over_two_pi_power() {
        for k in 10..=MAX_K {
            let approx = 2.0 / (2.0 * PI).powi(2 * k as i32);
            assert!((bernoulli_ratio(k).abs() / approx - 1.0).abs() < 1e-6);
        }
    }
}
