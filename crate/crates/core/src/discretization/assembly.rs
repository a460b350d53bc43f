//! SAAF/SN assembly: the block-diagonal streaming-collision matrix, the
//! reflecting-boundary coupling, and matrix-free scattering and fission.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::LinearOperator;
use crate::sparse::{block_diag, BlockLayout, CsrMatrix};

use super::element::ElementMatrices;
use super::mesh::{BoundaryFace, Side, StructuredMesh};
use super::problem::{compute_tau, BoundaryKind, ProblemSpec, StabilizedTau};
use super::quadrature::AngularQuadrature;

struct AssemblyContext<'a> {
    spec: &'a ProblemSpec,
    elem: ElementMatrices,
    tau: StabilizedTau,
    materials: Vec<usize>,
    faces: Vec<(Side, Vec<BoundaryFace>)>,
}

impl<'a> AssemblyContext<'a> {
    fn new(spec: &'a ProblemSpec) -> Result<Self> {
        let m = &spec.mesh;
        Ok(AssemblyContext {
            spec,
            elem: ElementMatrices::new([m.hx, m.hy, m.hz]),
            tau: compute_tau(spec)?,
            materials: spec.element_materials(),
            faces: Side::ALL.iter().map(|&s| (s, m.boundary_faces(s))).collect(),
        })
    }

    fn check(&self, g: usize, d: usize) -> Result<()> {
        if g >= self.spec.n_groups() {
            return Err(Error::IndexOutOfRange { index: g, dim: self.spec.n_groups() });
        }
        if d >= self.spec.n_directions() {
            return Err(Error::IndexOutOfRange { index: d, dim: self.spec.n_directions() });
        }
        Ok(())
    }

    /// `(L1 ψ*, (τ L1 - I + τ L2) ψ) + (L2 ψ*, ψ) + <ψ*, ψ>^+` for one
    /// (group, direction) pair. Outflow faces contribute on every side.
    fn block(&self, g: usize, d: usize) -> Result<CsrMatrix> {
        let mesh = &self.spec.mesh;
        let omega = self.spec.quadrature.directions[d];
        let k_omega = self.elem.streaming_stiffness(omega);
        let g_omega = self.elem.streaming_test(omega);
        let mut trip = Vec::with_capacity(mesh.n_elements() * 64);
        for e in 0..mesh.n_elements() {
            let sigma = self.spec.xs.materials[self.materials[e]].sigma_t[g];
            let tau = self.tau.get(e, g);
            let verts = mesh.element_vertices(e);
            for i in 0..8 {
                for j in 0..8 {
                    let v = tau * k_omega[i][j] + (tau * sigma - 1.0) * g_omega[i][j] + sigma * self.elem.mass[i][j];
                    trip.push((verts[i], verts[j], v));
                }
            }
        }
        for (side, faces) in &self.faces {
            let on = dot(omega, side.normal());
            if on > 0.0 {
                self.push_faces(&mut trip, faces, *side, on, 0, 0);
            }
        }
        CsrMatrix::from_triplets(mesh.n_vertices(), mesh.n_vertices(), trip)
    }

    fn push_faces(
        &self,
        trip: &mut Vec<(usize, usize, f64)>,
        faces: &[BoundaryFace],
        side: Side,
        scale: f64,
        row_offset: usize,
        col_offset: usize,
    ) {
        let fm = &self.elem.face_mass[side.index()];
        for f in faces {
            for p in 0..4 {
                for q in 0..4 {
                    trip.push((row_offset + f.vertices[p], col_offset + f.vertices[q], scale * fm[p][q]));
                }
            }
        }
    }

    /// Incoming reflected flux `-<ψ*, ψ_r>^-` on reflecting sides, coupling
    /// each incoming direction to its mirror partner.
    fn reflection(&self, layout: &BlockLayout) -> Result<CsrMatrix> {
        let q = &self.spec.quadrature;
        let n = layout.n_space;
        let mut trip = Vec::new();
        for (side, faces) in &self.faces {
            if self.spec.bcs.get(*side) != BoundaryKind::Reflecting {
                continue;
            }
            for d in 0..q.len() {
                let on = dot(q.directions[d], side.normal());
                if on >= 0.0 {
                    continue;
                }
                let r = q.mirror(d, side.axis()).ok_or_else(|| {
                    Error::InvalidInput(format!("no mirror direction for {d} on side {}", side.name()))
                })?;
                for g in 0..layout.n_groups {
                    let rows = layout.block_index(g, d) * n;
                    let cols = layout.block_index(g, r) * n;
                    self.push_faces(&mut trip, faces, *side, on, rows, cols);
                }
            }
        }
        CsrMatrix::from_triplets(layout.dim(), layout.dim(), trip)
    }

    /// `Σ_{e in material} (M_e + τ_{g,e} G_{d,e})` for every material.
    fn source_matrices(&self, g: usize, d: usize) -> Result<Vec<CsrMatrix>> {
        let mesh = &self.spec.mesh;
        let g_omega = self.elem.streaming_test(self.spec.quadrature.directions[d]);
        let n_mat = self.spec.xs.materials.len();
        let mut trips: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); n_mat];
        for e in 0..mesh.n_elements() {
            let tau = self.tau.get(e, g);
            let verts = mesh.element_vertices(e);
            let t = &mut trips[self.materials[e]];
            for i in 0..8 {
                for j in 0..8 {
                    t.push((verts[i], verts[j], self.elem.mass[i][j] + tau * g_omega[i][j]));
                }
            }
        }
        trips
            .into_iter()
            .map(|t| CsrMatrix::from_triplets(mesh.n_vertices(), mesh.n_vertices(), t))
            .collect()
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Streaming-collision block for group `g` and direction `d`.
pub fn assemble_block(spec: &ProblemSpec, g: usize, d: usize) -> Result<CsrMatrix> {
    let ctx = AssemblyContext::new(spec)?;
    ctx.check(g, d)?;
    ctx.block(g, d)
}

pub fn layout_of(spec: &ProblemSpec) -> BlockLayout {
    BlockLayout::new(spec.n_groups(), spec.n_directions(), spec.mesh.n_vertices())
}

/// Block-diagonal preconditioning matrix in field-major order.
pub fn assemble_preconditioner(spec: &ProblemSpec) -> Result<(CsrMatrix, BlockLayout)> {
    let ctx = AssemblyContext::new(spec)?;
    let layout = layout_of(spec);
    let blocks = assemble_blocks(&ctx, &layout)?;
    Ok((block_diag(&blocks), layout))
}

fn assemble_blocks(ctx: &AssemblyContext, layout: &BlockLayout) -> Result<Vec<CsrMatrix>> {
    (0..layout.n_blocks())
        .into_par_iter()
        .map(|j| ctx.block(j / layout.n_directions, j % layout.n_directions))
        .collect()
}

/// Consistent mass matrix `∫ φ_i φ_j` over the whole mesh.
pub fn mass_matrix(mesh: &StructuredMesh) -> CsrMatrix {
    let elem = ElementMatrices::new([mesh.hx, mesh.hy, mesh.hz]);
    assemble_scalar(mesh, &elem.mass)
}

/// Streaming-test matrix `∫ (Ω·∇φ_i) φ_j` over the whole mesh.
pub fn streaming_test_matrix(mesh: &StructuredMesh, omega: [f64; 3]) -> CsrMatrix {
    let elem = ElementMatrices::new([mesh.hx, mesh.hy, mesh.hz]);
    assemble_scalar(mesh, &elem.streaming_test(omega))
}

fn assemble_scalar(mesh: &StructuredMesh, local: &[[f64; 8]; 8]) -> CsrMatrix {
    let mut trip = Vec::with_capacity(mesh.n_elements() * 64);
    for e in 0..mesh.n_elements() {
        let v = mesh.element_vertices(e);
        for i in 0..8 {
            for j in 0..8 {
                trip.push((v[i], v[j], local[i][j]));
            }
        }
    }
    CsrMatrix::from_triplets(mesh.n_vertices(), mesh.n_vertices(), trip).expect("indices in range")
}

/// `Φ[g, s] = Σ_d w_d ψ[g, d, s]`, laid out group-major.
pub fn compute_scalar_flux(psi: &[f64], layout: &BlockLayout, quad: &AngularQuadrature) -> Result<Vec<f64>> {
    if psi.len() != layout.dim() {
        return Err(Error::dim("scalar flux input", layout.dim(), psi.len()));
    }
    if quad.len() != layout.n_directions {
        return Err(Error::dim("quadrature directions", layout.n_directions, quad.len()));
    }
    let n = layout.n_space;
    let mut phi = vec![0.0; layout.n_groups * n];
    for g in 0..layout.n_groups {
        let out = &mut phi[g * n..(g + 1) * n];
        for (d, &w) in quad.weights.iter().enumerate() {
            let block = &psi[layout.block_range(layout.block_index(g, d))];
            for (o, &p) in out.iter_mut().zip(block) {
                *o += w * p;
            }
        }
    }
    Ok(phi)
}

/// Assembled transport system: the block-diagonal matrix `P`, the
/// reflecting inflow coupling, and per-material source matrices used by
/// the scattering and fission actions. `A = P + reflection - scattering`.
#[derive(Debug, Clone)]
pub struct TransportOperator {
    spec: ProblemSpec,
    layout: BlockLayout,
    p: CsrMatrix,
    reflection: CsrMatrix,
    /// `sources[j][m]`: source weighting of block `j` on material `m`.
    sources: Vec<Vec<CsrMatrix>>,
    tau: StabilizedTau,
}

impl TransportOperator {
    pub fn new(spec: &ProblemSpec) -> Result<Self> {
        spec.validate()?;
        let ctx = AssemblyContext::new(spec)?;
        let layout = layout_of(spec);
        let blocks = assemble_blocks(&ctx, &layout)?;
        let p = block_diag(&blocks);
        let reflection = ctx.reflection(&layout)?;
        let sources = (0..layout.n_blocks())
            .into_par_iter()
            .map(|j| ctx.source_matrices(j / layout.n_directions, j % layout.n_directions))
            .collect::<Result<Vec<_>>>()?;
        let tau = ctx.tau.clone();
        Ok(TransportOperator {
            spec: spec.clone(),
            layout,
            p,
            reflection,
            sources,
            tau,
        })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn layout(&self) -> BlockLayout {
        self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    /// The preconditioning matrix `P`.
    pub fn preconditioning_matrix(&self) -> &CsrMatrix {
        &self.p
    }

    pub fn reflection_matrix(&self) -> &CsrMatrix {
        &self.reflection
    }

    pub fn tau(&self) -> &StabilizedTau {
        &self.tau
    }

    pub fn scalar_flux(&self, psi: &[f64]) -> Result<Vec<f64>> {
        compute_scalar_flux(psi, &self.layout, &self.spec.quadrature)
    }

    /// Applies `Σ_m W_{j,m} q_{g,m}` per block where
    /// `q_{g,m} = (1/4π) Σ_{g'} coef(m, g, g') Φ_{g'}`.
    fn apply_source<F>(&self, psi: &[f64], coef: F) -> Result<Vec<f64>>
    where
        F: Fn(usize, usize, usize) -> f64 + Sync,
    {
        let phi = self.scalar_flux(psi)?;
        let n = self.layout.n_space;
        let n_groups = self.layout.n_groups;
        let n_mat = self.spec.xs.materials.len();

        // q[g][m] as nodal vectors; None when identically zero.
        let q: Vec<Vec<Option<Vec<f64>>>> = (0..n_groups)
            .map(|g| {
                (0..n_mat)
                    .map(|m| {
                        let mut qv = vec![0.0; n];
                        let mut nonzero = false;
                        for gp in 0..n_groups {
                            let c = coef(m, g, gp) / (4.0 * PI);
                            if c != 0.0 {
                                nonzero = true;
                                let src = &phi[gp * n..(gp + 1) * n];
                                for (o, &s) in qv.iter_mut().zip(src) {
                                    *o += c * s;
                                }
                            }
                        }
                        nonzero.then_some(qv)
                    })
                    .collect()
            })
            .collect();

        let mut out = vec![0.0; self.layout.dim()];
        out.par_chunks_mut(n)
            .enumerate()
            .try_for_each(|(j, block)| -> Result<()> {
                let g = j / self.layout.n_directions;
                for (m, qm) in q[g].iter().enumerate() {
                    if let Some(qv) = qm {
                        let w = &self.sources[j][m];
                        for (i, o) in block.iter_mut().enumerate() {
                            let (cols, vals) = w.row(i);
                            *o += cols.iter().zip(vals).map(|(&c, &v)| v * qv[c]).sum::<f64>();
                        }
                    }
                }
                Ok(())
            })?;
        Ok(out)
    }

    /// Discrete isotropic scattering source `S ψ`.
    pub fn apply_scattering(&self, psi: &[f64]) -> Result<Vec<f64>> {
        let mats = &self.spec.xs.materials;
        self.apply_source(psi, |m, g, gp| mats[m].sigma_s[gp][g])
    }

    /// Discrete fission source `B ψ`.
    pub fn apply_fission(&self, psi: &[f64]) -> Result<Vec<f64>> {
        let mats = &self.spec.xs.materials;
        self.apply_source(psi, |m, g, gp| mats[m].chi[g] * mats[m].nu_sigma_f[gp])
    }

    /// `A ψ = P ψ + (reflected inflow) - S ψ`.
    pub fn apply_a(&self, psi: &[f64]) -> Result<Vec<f64>> {
        let mut y = self.p.spmv(psi)?;
        if self.reflection.nnz() > 0 {
            let r = self.reflection.spmv(psi)?;
            for (a, b) in y.iter_mut().zip(r) {
                *a += b;
            }
        }
        let s = self.apply_scattering(psi)?;
        for (a, b) in y.iter_mut().zip(s) {
            *a -= b;
        }
        Ok(y)
    }

    /// `A` as a [`LinearOperator`].
    pub fn a_operator(&self) -> TransportA<'_> {
        TransportA(self)
    }

    /// `B` as a [`LinearOperator`].
    pub fn b_operator(&self) -> TransportB<'_> {
        TransportB(self)
    }
}

pub struct TransportA<'a>(&'a TransportOperator);
pub struct TransportB<'a>(&'a TransportOperator);

impl LinearOperator for TransportA<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.0.apply_a(x)
    }
}

impl LinearOperator for TransportB<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.0.apply_fission(x)
    }
}
