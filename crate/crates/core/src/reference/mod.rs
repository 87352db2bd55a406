//! Baselines the facet method is measured against: a two-phase Dantzig
//! tableau simplex on standard form, and exhaustive enumeration of basic
//! solutions as a ground-truth oracle.

mod brute;
mod dantzig;
mod standard_form;

pub use brute::{binomial, brute_force_optimal, OracleError, OracleOutcome, DEFAULT_ENUMERATION_CAP};
pub use dantzig::{dantzig_solve, DantzigOptions, DantzigOutcome, TieOrder};
pub use standard_form::{to_standard_form, StandardFormError, StandardFormLp};
