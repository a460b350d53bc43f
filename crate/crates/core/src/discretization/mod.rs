//! Structured-mesh SAAF discretization with discrete-ordinates collocation.

mod assembly;
pub mod config;
mod element;
mod mesh;
mod problem;
mod quadrature;
mod xs;

pub use assembly::{
    assemble_block, assemble_preconditioner, compute_scalar_flux, layout_of, mass_matrix,
    streaming_test_matrix, TransportA, TransportB, TransportOperator,
};
pub use element::ElementMatrices;
pub use mesh::{face_local_nodes, BoundaryFace, Side, StructuredMesh};
pub use problem::{
    compute_tau, tau_value, BoundaryConditions, BoundaryKind, ProblemSpec, StabilizedTau,
    Stabilization,
};
pub use quadrature::{build_quadrature, AngularQuadrature, QuadratureKind};
pub use xs::{CrossSectionSet, Material};
