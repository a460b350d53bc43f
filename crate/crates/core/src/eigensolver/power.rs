use crate::discretization::TransportOperator;
use crate::error::{Error, Result};
use crate::operator::{LinearOperator, Preconditioner};
use crate::sparse::vector::norm2;
use crate::sparse::CsrMatrix;

use super::gmres::{gmres_solve, GmresOptions};

/// The pair of operators of `A ψ = (1/k) B ψ`.
pub trait EigenProblem: Sync {
    fn dim(&self) -> usize;
    fn apply_a(&self, psi: &[f64]) -> Result<Vec<f64>>;
    fn apply_b(&self, psi: &[f64]) -> Result<Vec<f64>>;
}

impl EigenProblem for TransportOperator {
    fn dim(&self) -> usize {
        TransportOperator::dim(self)
    }
    fn apply_a(&self, psi: &[f64]) -> Result<Vec<f64>> {
        TransportOperator::apply_a(self, psi)
    }
    fn apply_b(&self, psi: &[f64]) -> Result<Vec<f64>> {
        self.apply_fission(psi)
    }
}

/// Explicit matrices `A` and `B`.
#[derive(Debug, Clone)]
pub struct MatrixPencil {
    pub a: CsrMatrix,
    pub b: CsrMatrix,
}

impl MatrixPencil {
    pub fn new(a: CsrMatrix, b: CsrMatrix) -> Result<Self> {
        if !a.is_square() || a.n_rows() != b.n_rows() || !b.is_square() {
            return Err(Error::dim("matrix pencil", a.n_rows(), b.n_rows()));
        }
        Ok(MatrixPencil { a, b })
    }
}

impl EigenProblem for MatrixPencil {
    fn dim(&self) -> usize {
        self.a.n_rows()
    }
    fn apply_a(&self, psi: &[f64]) -> Result<Vec<f64>> {
        self.a.spmv(psi)
    }
    fn apply_b(&self, psi: &[f64]) -> Result<Vec<f64>> {
        self.b.spmv(psi)
    }
}

pub(crate) struct AOperator<'a>(pub &'a dyn EigenProblem);

impl LinearOperator for AOperator<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.0.apply_a(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenState {
    pub psi: Vec<f64>,
    pub k: f64,
}

/// `k = ||B ψ||` in the Euclidean norm.
pub fn eigenvalue_of(psi: &[f64], b: &dyn Fn(&[f64]) -> Result<Vec<f64>>) -> Result<f64> {
    if psi.iter().all(|v| *v == 0.0) {
        return Err(Error::InvalidInput("eigenvalue of a zero vector".into()));
    }
    Ok(norm2(&b(psi)?))
}

/// Runs `n_iters` steps of `A ψ_{n+1} = B ψ_n / k_n`, `k_{n+1} = ||B ψ_{n+1}||`.
/// The input `k` is ignored; the first right-hand side is normalized by
/// `||B ψ_0||`.
pub fn inverse_power_iterate(
    problem: &dyn EigenProblem,
    state: EigenState,
    n_iters: usize,
    pc: &dyn Preconditioner,
    gmres: &GmresOptions,
) -> Result<(EigenState, usize)> {
    if n_iters == 0 {
        return Err(Error::InvalidInput("inverse power iteration needs n_iters >= 1".into()));
    }
    if state.psi.len() != problem.dim() {
        return Err(Error::dim("power iteration state", problem.dim(), state.psi.len()));
    }
    let a = AOperator(problem);
    let mut psi = state.psi;
    let mut rhs = problem.apply_b(&psi)?;
    let mut k = norm2(&rhs);
    let mut gmres_its = 0;
    for it in 1..=n_iters {
        if k == 0.0 {
            return Err(Error::NoFission);
        }
        rhs.iter_mut().for_each(|v| *v /= k);
        let out = gmres_solve(&a, pc, &rhs, Some(&psi), gmres).map_err(|e| Error::PowerIteration {
            iteration: it,
            source: Box::new(e),
        })?;
        gmres_its += out.iterations;
        psi = out.x;
        rhs = problem.apply_b(&psi)?;
        k = norm2(&rhs);
    }
    if k == 0.0 {
        return Err(Error::NoFission);
    }
    Ok((EigenState { psi, k }, gmres_its))
}
