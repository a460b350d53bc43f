//! Linear-operator and preconditioner abstractions shared by the solvers.

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// A square linear map applied to dense vectors.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>>;
}

/// Approximate inverse applied on the right of a Krylov operator.
pub trait Preconditioner: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, r: &[f64]) -> Result<Vec<f64>>;
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.n_rows()
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.spmv(x)
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).apply(x)
    }
}

impl<T: Preconditioner + ?Sized> Preconditioner for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        (**self).apply(r)
    }
}

impl<T: Preconditioner + ?Sized> Preconditioner for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        (**self).apply(r)
    }
}

/// Wraps a closure as a [`LinearOperator`].
pub struct FnOperator<F> {
    n: usize,
    f: F,
}

impl<F> FnOperator<F>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
{
    pub fn new(n: usize, f: F) -> Self {
        FnOperator { n, f }
    }
}

impl<F> LinearOperator for FnOperator<F>
where
    F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
{
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::dim("operator input", self.n, x.len()));
        }
        (self.f)(x)
    }
}

/// No preconditioning.
#[derive(Debug, Clone, Copy)]
pub struct IdentityPreconditioner(pub usize);

impl Preconditioner for IdentityPreconditioner {
    fn dim(&self) -> usize {
        self.0
    }

    fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        if r.len() != self.0 {
            return Err(Error::dim("preconditioner input", self.0, r.len()));
        }
        Ok(r.to_vec())
    }
}

/// Exact inverse through a direct factorization.
pub struct DirectPreconditioner {
    lu: crate::sparse::ComponentLu,
}

impl DirectPreconditioner {
    pub fn new(a: &CsrMatrix) -> Result<Self> {
        Ok(DirectPreconditioner {
            lu: crate::sparse::ComponentLu::factor(a, "direct preconditioner")?,
        })
    }
}

impl Preconditioner for DirectPreconditioner {
    fn dim(&self) -> usize {
        self.lu.dim()
    }

    fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        self.lu.solve(r)
    }
}
