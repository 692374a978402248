//! Integrals of `|curve(t)|` and L1 / sup distances between targets and
//! vertical translates of zeta.

mod adaptive;
mod config;
mod distance;
mod interp;
mod target;

pub use adaptive::{integrate_abs, integrate_abs_with_noise, sup_abs, QuadOutcome};
pub use config::{QuadratureConfig, Rule};
pub use distance::{l1_translate_distance, short_interval_mean, translate_distance, Norm};
pub use interp::SampledCurve;
pub use target::{LineSegment, TargetFunction, TargetKind, WeightFunction};
