//! Shared fixtures for the kernel benchmarks.

use masm_core::discretization::{assemble_preconditioner, TransportOperator};
use masm_core::multilevel::SmootherSetup;
use masm_core::problems::{mini_lattice, MiniLatticeParams};
use masm_core::schwarz::{hierarchical_partition, unknown_owner, SchwarzOptions};
use masm_core::{BlockLayout, CsrMatrix};

/// Mini-lattice preconditioning matrix with a 1 x `np2` partition.
pub struct Fixture {
    pub p: CsrMatrix,
    pub layout: BlockLayout,
    pub smoother: SmootherSetup,
    pub op: TransportOperator,
}

pub fn lattice_fixture(pins: usize, groups: usize, np2: usize) -> Fixture {
    let params = MiniLatticeParams { pins, groups, ..Default::default() };
    let spec = mini_lattice(&params).expect("valid lattice").to_spec().expect("valid spec");
    let (p, layout) = assemble_preconditioner(&spec).expect("assembly");
    let part = hierarchical_partition(&spec.mesh, 1, np2).expect("partition");
    let smoother = SmootherSetup {
        owner: unknown_owner(&part.vertex_owner, &layout).expect("owners"),
        n_parts: part.n_parts(),
        schwarz: SchwarzOptions::default(),
    };
    let op = TransportOperator::new(&spec).expect("operator");
    Fixture { p, layout, smoother, op }
}

/// Deterministic test vector.
pub fn ramp(n: usize) -> Vec<f64> {
    (0..n).map(|i| 1.0 + (i % 17) as f64 / 17.0).collect()
}
