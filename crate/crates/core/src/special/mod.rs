//! Special functions on vertical lines: `ζ(s)`, `log Γ(z)`, `χ(s)`, `θ(t)`, `Z(t)`.
//!
//! All entry points are pure functions, safe to call from any number of threads.

mod accuracy;
mod bernoulli;
mod chi;
mod gamma;
mod hardy;
mod riemann_siegel;
mod theta;
mod zeta;

pub use accuracy::{theta_rounding_noise, zeta_rounding_noise, EvalAccuracy, MAX_HEIGHT};
pub use chi::{chi_factor, log_chi_modulus};
pub use gamma::log_gamma;
pub use hardy::{hardy_z, HardyZ};
pub use riemann_siegel::{riemann_siegel_error_bound, riemann_siegel_z};
pub use theta::{riemann_siegel_theta, theta_via_log_gamma, ThetaExpansion};
pub use zeta::{eval_zeta, eval_zeta_euler_maclaurin, zeta_on_vertical_grid};

pub(crate) use bernoulli::{bernoulli_2k, bernoulli_ratio};
