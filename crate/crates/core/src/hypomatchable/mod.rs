//! Structure of factor-critical graphs: ear decompositions, recognition of
//! the factor-critical graphs without a {P2, P7}- or {P2, P9}-factor,
//! crush sets, and alternating paths.

mod alternating;
mod classify;
mod ears;

pub use alternating::{alternating_path_to, long_alternating_path};
pub use classify::{
    classify_no_factor, crush_set, crush_value, is_windmill, CrushBound, FamilyClass, FamilyTag,
};
pub use ears::{
    ear_decomposition, is_s_large, validate_ears, Axiom, Ear, EarDecomposition, EarKind,
    EarViolation,
};
