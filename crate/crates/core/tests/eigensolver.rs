mod common;

use common::*;
use masm_core::discretization::{BoundaryConditions, TransportOperator};
use masm_core::eigensolver::{
    gmres_solve, jfnk_matvec, newton_iterate, newton_solve, EigenResidual, FdDelta, FixedSourceResidual,
    GmresOptions, NonlinearResidual, SolverOptions,
};
use masm_core::operator::LinearOperator;
use masm_core::sparse::vector::norm2;
use masm_core::{DirectPreconditioner, IdentityPreconditioner, Preconditioner};

fn tight() -> SolverOptions {
    SolverOptions { newton_rtol: 1e-10, ..Default::default() }
}

fn one_group_op(n: usize) -> TransportOperator {
    let mat = material(vec![1.0], vec![vec![0.5]], vec![0.6], vec![1.0]);
    let spec = uniform_spec(n, 1.0, 2, mat, BoundaryConditions::all_reflecting());
    TransportOperator::new(&spec).unwrap()
}

fn solve_k(op: &TransportOperator, psi0: Option<Vec<f64>>, opts: &SolverOptions) -> f64 {
    let n = op.dim();
    let layout = op.layout();
    let w = op.spec().quadrature.weights.clone();
    newton_solve(op, || Ok(Box::new(IdentityPreconditioner(n)) as Box<dyn Preconditioner>), psi0, Some((&layout, &w)), opts)
        .unwrap()
        .state
        .k
}

#[test]
fn one_group_infinite_medium() {
    let op = one_group_op(4);
    let k = solve_k(&op, None, &tight());
    assert!((k - 1.2).abs() < 1e-8, "k = {k}");
}

/// Largest eigenvalue of `(diag(σ_t) - S)^{-1} χ νσ_f^T` for two groups.
fn two_group_oracle(st: [f64; 2], ss: [[f64; 2]; 2], nf: [f64; 2], chi: [f64; 2]) -> f64 {
    // removal matrix R[g][g'] = δ σ_t - σ_s(g' -> g)
    let r = [[st[0] - ss[0][0], -ss[1][0]], [-ss[0][1], st[1] - ss[1][1]]];
    let det = r[0][0] * r[1][1] - r[0][1] * r[1][0];
    let inv = [[r[1][1] / det, -r[0][1] / det], [-r[1][0] / det, r[0][0] / det]];
    let f = [[chi[0] * nf[0], chi[0] * nf[1]], [chi[1] * nf[0], chi[1] * nf[1]]];
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = (0..2).map(|l| inv[i][l] * f[l][j]).sum();
        }
    }
    let tr = m[0][0] + m[1][1];
    let dt = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    (tr + (tr * tr - 4.0 * dt).sqrt()) / 2.0
}

#[test]
fn two_group_infinite_medium() {
    let (st, ss, nf, chi) = ([0.3, 0.9], [[0.26, 0.02], [0.0, 0.65]], [0.008, 0.25], [1.0, 0.0]);
    let expected = two_group_oracle(st, ss, nf, chi);
    let mat = material(st.to_vec(), ss.iter().map(|r| r.to_vec()).collect(), nf.to_vec(), chi.to_vec());
    let spec = uniform_spec(3, 1.0, 2, mat, BoundaryConditions::all_reflecting());
    let op = TransportOperator::new(&spec).unwrap();
    let k = solve_k(&op, None, &tight());
    assert!((k - expected).abs() < 1e-8, "k = {k}, expected {expected}");
}

#[test]
fn eigenvalue_is_scale_invariant() {
    let params = masm_core::problems::MiniLatticeParams { pins: 2, cells_per_pin: 2, ..Default::default() };
    let spec = masm_core::problems::mini_lattice(&params).unwrap().to_spec().unwrap();
    let op = TransportOperator::new(&spec).unwrap();
    let opts = SolverOptions { newton_rtol: 1e-10, ..Default::default() };
    let mut r = rng(1);
    let psi0: Vec<f64> = random_vec(&mut r, op.dim()).iter().map(|v| 1.0 + 0.5 * v).collect();
    let k1 = solve_k(&op, Some(psi0.clone()), &opts);
    let k2 = solve_k(&op, Some(psi0.iter().map(|v| 2.0 * v).collect()), &opts);
    assert!((k1 - k2).abs() < 1e-8, "{k1} vs {k2}");
}

#[test]
fn converged_state_is_a_fixed_point() {
    let op = one_group_op(3);
    let n = op.dim();
    let out = newton_solve(
        &op,
        || Ok(Box::new(IdentityPreconditioner(n)) as Box<dyn Preconditioner>),
        None,
        None,
        &tight(),
    )
    .unwrap();
    let f = EigenResidual { problem: &op }.eval(&out.state.psi).unwrap();
    let a = op.apply_a(&out.state.psi).unwrap();
    assert!(norm2(&f) <= 1e-8 * norm2(&a));
    assert!(out.state.psi.iter().all(|v| *v > 0.0));
    assert!(out.report.timing_containment_holds());
    for w in out.residual_history.windows(2) {
        assert!(w[1] <= w[0]);
    }
}

fn linear_setup() -> (TransportOperator, Vec<f64>) {
    let mat = material(vec![1.0], vec![vec![0.0]], vec![0.0], vec![0.0]);
    let spec = uniform_spec(3, 0.5, 2, mat, BoundaryConditions::all_vacuum());
    let op = TransportOperator::new(&spec).unwrap();
    let q = random_vec(&mut rng(9), op.dim());
    (op, q)
}

#[test]
fn jfnk_of_linear_residual_is_the_operator() {
    let (op, q) = linear_setup();
    let a = op.a_operator();
    let res = FixedSourceResidual { a: &a, q: &q };
    let mut r = rng(4);
    for _ in 0..5 {
        let psi = random_vec(&mut r, op.dim());
        let v = random_vec(&mut r, op.dim());
        let f = res.eval(&psi).unwrap();
        let jv = jfnk_matvec(&res, &psi, &f, &v, FdDelta::Standard).unwrap();
        let av = a.apply(&v).unwrap();
        assert!(rel_diff(&jv, &av) < 1e-6);
    }
}

#[test]
fn jfnk_matches_central_differences() {
    let params = masm_core::problems::MiniLatticeParams { pins: 2, cells_per_pin: 2, ..Default::default() };
    let spec = masm_core::problems::mini_lattice(&params).unwrap().to_spec().unwrap();
    let op = TransportOperator::new(&spec).unwrap();
    let res = EigenResidual { problem: &op };
    let mut r = rng(21);
    for _ in 0..20 {
        let psi: Vec<f64> = random_vec(&mut r, op.dim()).iter().map(|v| 1.0 + 0.5 * v).collect();
        let v = random_vec(&mut r, op.dim());
        let f = res.eval(&psi).unwrap();
        let jv = jfnk_matvec(&res, &psi, &f, &v, FdDelta::Standard).unwrap();
        let h = 1e-5;
        let plus: Vec<f64> = psi.iter().zip(&v).map(|(p, x)| p + h * x).collect();
        let minus: Vec<f64> = psi.iter().zip(&v).map(|(p, x)| p - h * x).collect();
        let (fp, fm) = (res.eval(&plus).unwrap(), res.eval(&minus).unwrap());
        let central: Vec<f64> = fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
        assert!(rel_diff(&jv, &central) < 1e-4);
    }
}

#[test]
fn linear_fixed_source_newton_takes_at_most_two_steps() {
    let (op, q) = linear_setup();
    let a = op.a_operator();
    let res = FixedSourceResidual { a: &a, q: &q };
    let pc = DirectPreconditioner::new(op.preconditioning_matrix()).unwrap();
    let opts = SolverOptions { gmres_rtol: 1e-10, ..Default::default() };
    let (psi, history) = newton_iterate(&res, &pc, vec![0.0; op.dim()], &opts).unwrap();
    assert!(history.len() - 1 <= 2);
    let direct = gmres_solve(&a, &pc, &q, None, &GmresOptions { rtol: 1e-12, ..Default::default() }).unwrap();
    assert!(rel_diff(&psi, &direct.x) < 1e-6);
}
