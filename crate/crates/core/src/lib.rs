//! Graded path algebras of finite acyclic quivers: deciding
//! silting-discreteness, producing reduction witnesses, and checking
//! pre-simple-minded collections with exact graded Hom/Ext computations.

pub mod classify;
pub mod error;
pub mod field;
pub mod linalg;
pub mod qtilde;
pub mod quiver;
pub mod reduce;
pub mod repcat;

pub use classify::{check_condition_two, classify, ClassificationVerdict, ConditionTwoReport, Consistency, Reason};
pub use error::{Error, Result};
pub use field::{ExactField, Scalar};
pub use linalg::Matrix;
pub use qtilde::{build_qtilde, count_indec, dynkin_decompose, positive_root_count, IndecCount, LevelQuiver};
pub use quiver::{Arrow, CycleStep, CycleTraversal, GradedQuiver, GraphType, VertexPotential};
pub use reduce::{match_core_shape, reduce_to_core, CoreShape, CoreTag, Op, ReductionStep, ReductionTrace};
pub use repcat::{check_pre_smc, ext1_graded, hom_graded, standard_resolution, Family, GradedRep, PsmcReport};
