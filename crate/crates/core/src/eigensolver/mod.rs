//! Inverse power iteration, Jacobian-free Newton-Krylov and flexible GMRES
//! for the generalized eigenproblem `A ψ = (1/k) B ψ`.

mod gmres;
mod newton;
mod power;
mod report;

pub use gmres::{gmres_solve, GmresOptions, GmresOutcome};
pub use newton::{
    jfnk_matvec, newton_iterate, newton_solve, EigenResidual, FdDelta, FixedSourceResidual, LineSearchOptions,
    NewtonOutcome, NonlinearResidual, SolverOptions,
};
pub use power::{eigenvalue_of, inverse_power_iterate, EigenProblem, EigenState, MatrixPencil};
pub use report::ConvergenceReport;
