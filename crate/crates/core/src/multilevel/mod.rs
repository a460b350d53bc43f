//! Aggregation coarsening, interpolation extension, Galerkin hierarchies
//! and the multilevel additive Schwarz V-cycle.

mod aggregation;
mod hierarchy;

pub use aggregation::{aggregate, build_sub_interpolation, extend_interpolation, Aggregation};
pub use hierarchy::{
    setup_masm, setup_masm_sub, CoarsenOptions, CoarseningMode, Level, LevelSummary, MultilevelHierarchy,
    SmootherSetup,
};
