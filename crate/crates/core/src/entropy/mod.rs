//! Generalized entropy conditions: extreme spatial gradients of a solution's
//! superdifferential, convex and concave envelopes of `H` over them, the
//! two-branch chord condition and the one-dimensional shock classifier.
//!
//! The extreme set used everywhere is the projection of the space-time extreme
//! set `D^e u(t, x)`, which can be larger than the extreme set of the time
//! slice `u(t, ·)`.

mod checks;
mod envelope;

pub use checks::{
    check_entropy_at, check_two_branch, classify_shock_d1, extreme_spatial_gradients, scan_field,
    subsolution_margin, Certificate, EntropyReport, EntropyScan, ShockReport, TwoBranchReport,
    DEFAULT_DENSITY, DEFAULT_TOL, SCAN_ACTIVATION_TOL,
};
pub use envelope::{envelope_value, EnvelopeMode, EnvelopeQuery};
