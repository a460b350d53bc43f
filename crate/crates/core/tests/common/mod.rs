#![allow(dead_code)]

use masm_core::discretization::config::QuadratureConfig;
use masm_core::discretization::{
    build_quadrature, BoundaryConditions, CrossSectionSet, Material, ProblemSpec, QuadratureKind, Stabilization,
    StructuredMesh,
};
use masm_core::CsrMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn ls(order: usize) -> QuadratureConfig {
    QuadratureConfig { kind: QuadratureKind::LevelSymmetric, order }
}

pub fn material(sigma_t: Vec<f64>, sigma_s: Vec<Vec<f64>>, nu_sigma_f: Vec<f64>, chi: Vec<f64>) -> Material {
    Material { id: 0, sigma_t, sigma_s, nu_sigma_f, chi }
}

pub fn uniform_spec(n: usize, h: f64, order: usize, mat: Material, bcs: BoundaryConditions) -> ProblemSpec {
    let mesh = StructuredMesh::cube(n, h).unwrap();
    let quad = build_quadrature(QuadratureKind::LevelSymmetric, order).unwrap();
    let map = vec![mat.id; mesh.n_elements()];
    let xs = CrossSectionSet::new(vec![mat]).unwrap();
    ProblemSpec::new(mesh, quad, xs, map, bcs, Stabilization::default()).unwrap()
}

/// Random sparse matrix with roughly `density` fill, stored densely.
pub fn random_dense(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| if rng.gen_bool(density) { rng.gen_range(-1.0..1.0) } else { 0.0 })
                .collect()
        })
        .collect()
}

pub fn dense_matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut c = vec![vec![0.0; m]; n];
    for i in 0..n {
        for l in 0..k {
            for j in 0..m {
                c[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    c
}

pub fn dense_transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn max_abs_diff(a: &CsrMatrix, b: &[Vec<f64>]) -> f64 {
    let d = a.to_dense();
    d.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs(b: &[Vec<f64>]) -> f64 {
    b.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max)
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt().max(1e-300);
    num / den
}
