//! Reproducible experiments, each producing an [`ExperimentRecord`].

mod convexity;
mod grid;
mod growth;
mod phase;
mod record;
mod shifts;

pub use convexity::{
    certified_modulus_bound, convexity_check, lemma1_parameters, ConvexityParams, M_GRID_STEP, M_SAFETY,
};
pub use grid::{phase_locked_spacing, Sampling, ShiftGrid};
pub use growth::{growth_exponent_fit, DEFAULT_WINDOWS, SLOPE_TOLERANCE};
pub use phase::{phase_lower_bound, sine_phase_average, sine_phase_sweep, PHASE_CUTOFF};
pub use record::{ExperimentRecord, Verdict};
pub use shifts::{
    density_measure, nonuniversality_bound_run, translate_search, z_universality_search, ZMode, DEFAULT_SLACK,
};
