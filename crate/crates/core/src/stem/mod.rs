//! Stem functions on conjugate-symmetric planar domains and the direct calculus `F -> F_σ`.

mod calculus;
mod domain;
mod function;

pub use calculus::{
    gfc_eval, intrinsic_check, product_rule_check, representation_formula, saturated_membership,
    slice_lift, slice_restriction, spectra_of_set_membership, verify_stem, zero_set_membership,
    SampledCheck, SliceFunction, DEFAULT_STEM_SAMPLES, DEFAULT_STEM_TOL,
};
pub use domain::{Disk, PlanarDomain, Rect};
pub use function::{Evaluator, StemFunction, StemKind};
