//! Hierarchical partitioning and one-level restricted additive Schwarz.

mod partition;
mod ras;

pub use partition::{assign_shared_vertices, hierarchical_partition, rcb, Partition};
pub use ras::{build_overlap, unknown_owner, LocalSolverKind, RasPreconditioner, SchwarzOptions};
