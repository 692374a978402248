//! Numerical laboratory for the Riemann zeta function on vertical lines.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`] evaluates `ζ(s)`, `log Γ(z)`, `χ(s)`, the Riemann–Siegel theta
//!   function and Hardy's `Z(t)` with controlled absolute error.
//! * [`quadrature`] integrates `|curve(t)|` adaptively and builds the L1
//!   distances between target functions and vertical translates of `ζ`.
//! * [`zeros`] locates critical-line zeros from sign changes of `Z(t)`.
//! * [`experiments`] packages the lower-bound, convexity, growth and search
//!   computations as reproducible [`experiments::ExperimentRecord`]s.

pub mod error;
pub mod experiments;
pub mod fmt;
mod par;
pub mod quadrature;
pub mod special;
pub mod zeros;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Scalar currency of every evaluation: `re + i·im`.
pub type ComplexValue = Complex64;
