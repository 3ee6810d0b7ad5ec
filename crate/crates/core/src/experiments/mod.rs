//! Verifiers for the character-sum identities, subgroup intersection and
//! growth bounds, the packing bound, and the interval experiment.
//!
//! Every entry point returns a [`BoundReport`](crate::BoundReport). Inequalities
//! without an unknown constant set `ok`; the rest are report-only.

mod formulas;
mod identities;
mod interval;
mod subgroups;

pub use formulas::{classical_bounds, gd_low_value, lstar, up_g_prelim};
pub use identities::{n_count_report, w_identity_report};
pub use interval::{bourgain_report, interval_mult_report};
pub use subgroups::{
    growth_exponent_report, packing_bound_harness, shkvyu_bound, shkvyu_hypothesis, shkvyu_report,
    DEFAULT_EPSILON, REFERENCE_GROWTH_EXPONENT,
};
