//! Multilevel additive Schwarz preconditioning for SN transport k-eigenvalue
//! problems solved by Jacobian-free Newton-Krylov.

pub mod discretization;
pub mod eigensolver;
pub mod error;
pub mod multilevel;
pub mod operator;
pub mod problems;
pub mod schwarz;
pub mod sparse;

pub use error::{Error, Result};
pub use operator::{DirectPreconditioner, FnOperator, IdentityPreconditioner, LinearOperator, Preconditioner};
pub use sparse::{BlockLayout, CsrMatrix, IndexSet};
