//! Graded representations, graded Hom and Ext¹, projective resolutions and
//! the pre-simple-minded-collection check.

pub mod builders;
pub mod hom;
pub mod json;
pub mod psmc;
pub mod rep;
pub mod resolution;

pub use builders::Family;
pub use hom::{hom_basis, hom_dim, hom_dims, hom_graded, GradedMorphism, HomSpace};
pub use psmc::{check_pre_smc, PairEntry, PsmcReport, Violation, ViolationKind};
pub use rep::{GradedRep, Path, ProjectiveBasis, Slot};
pub use resolution::{
    ext1_graded, ext_vanishing_shortcut, minimal_resolution_shape, standard_resolution, ProjectiveShape,
    StandardResolution,
};
