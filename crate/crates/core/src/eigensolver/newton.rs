use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::operator::{FnOperator, LinearOperator, Preconditioner};
use crate::sparse::vector::norm2;
use crate::sparse::BlockLayout;

use super::gmres::{gmres_solve, GmresOptions};
use super::power::{inverse_power_iterate, EigenProblem, EigenState};
use super::report::{to_millis, ConvergenceReport};

/// Finite-difference step for the Jacobian-free matvec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FdDelta {
    /// `sqrt(eps) (1 + ||ψ||) / ||v||`.
    Standard,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchOptions {
    /// Armijo sufficient-decrease constant on `||F||^2`.
    pub armijo: f64,
    pub factor: f64,
    pub max_halvings: usize,
}

impl Default for LineSearchOptions {
    fn default() -> Self {
        LineSearchOptions {
            armijo: 1e-4,
            factor: 0.5,
            max_halvings: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub newton_rtol: f64,
    /// Absolute floor on `||F||`, used when the initial residual is already tiny.
    pub newton_atol: f64,
    pub gmres_rtol: f64,
    pub gmres_restart: usize,
    pub gmres_max_iters: usize,
    pub max_newton: usize,
    pub max_power: usize,
    pub n_initial_power: usize,
    pub fd_delta: FdDelta,
    pub line_search: LineSearchOptions,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            newton_rtol: 1e-6,
            newton_atol: 1e-13,
            gmres_rtol: 1e-1,
            gmres_restart: 30,
            gmres_max_iters: 1000,
            max_newton: 50,
            max_power: 500,
            n_initial_power: 2,
            fd_delta: FdDelta::Standard,
            line_search: LineSearchOptions::default(),
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| v > 0.0 && v < 1.0;
        if !unit(self.newton_rtol) || !unit(self.gmres_rtol) || self.newton_atol < 0.0 {
            return Err(Error::InvalidInput("solver tolerances must lie in (0, 1)".into()));
        }
        if self.gmres_restart == 0 || self.gmres_max_iters == 0 {
            return Err(Error::InvalidInput("gmres restart and budget must be >= 1".into()));
        }
        let ls = &self.line_search;
        if !(ls.factor > 0.0 && ls.factor < 1.0) || !(ls.armijo > 0.0 && ls.armijo < 0.5) {
            return Err(Error::InvalidInput("line search needs 0 < factor < 1 and 0 < armijo < 0.5".into()));
        }
        Ok(())
    }

    pub fn gmres(&self) -> GmresOptions {
        GmresOptions {
            rtol: self.gmres_rtol,
            restart: self.gmres_restart,
            max_iters: self.gmres_max_iters,
        }
    }
}

/// A nonlinear map `F` whose root Newton seeks.
pub trait NonlinearResidual: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, psi: &[f64]) -> Result<Vec<f64>>;
}

/// `F(ψ) = A ψ - B ψ / ||B ψ||`.
pub struct EigenResidual<'a> {
    pub problem: &'a dyn EigenProblem,
}

impl NonlinearResidual for EigenResidual<'_> {
    fn dim(&self) -> usize {
        self.problem.dim()
    }

    fn eval(&self, psi: &[f64]) -> Result<Vec<f64>> {
        let mut f = self.problem.apply_a(psi)?;
        let b = self.problem.apply_b(psi)?;
        let k = norm2(&b);
        if k == 0.0 {
            return Err(Error::NoFission);
        }
        for (fi, bi) in f.iter_mut().zip(&b) {
            *fi -= bi / k;
        }
        Ok(f)
    }
}

/// `F(ψ) = A ψ - q` for a fixed source `q`.
pub struct FixedSourceResidual<'a> {
    pub a: &'a dyn LinearOperator,
    pub q: &'a [f64],
}

impl NonlinearResidual for FixedSourceResidual<'_> {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn eval(&self, psi: &[f64]) -> Result<Vec<f64>> {
        let mut f = self.a.apply(psi)?;
        for (fi, qi) in f.iter_mut().zip(self.q) {
            *fi -= qi;
        }
        Ok(f)
    }
}

/// `(F(ψ + δ v) - F(ψ)) / δ` given `f_psi = F(ψ)`.
pub fn jfnk_matvec(
    residual: &dyn NonlinearResidual,
    psi: &[f64],
    f_psi: &[f64],
    v: &[f64],
    mode: FdDelta,
) -> Result<Vec<f64>> {
    let n = residual.dim();
    if psi.len() != n || v.len() != n || f_psi.len() != n {
        return Err(Error::dim("jfnk matvec", n, v.len()));
    }
    let v_norm = norm2(v);
    if v_norm == 0.0 {
        return Err(Error::DegenerateDirection(v_norm));
    }
    let delta = match mode {
        FdDelta::Standard => f64::EPSILON.sqrt() * (1.0 + norm2(psi)) / v_norm,
        FdDelta::Fixed(d) => d,
    };
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::DegenerateDirection(v_norm));
    }
    let shifted: Vec<f64> = psi.iter().zip(v).map(|(p, vi)| p + delta * vi).collect();
    let f_shift = residual.eval(&shifted)?;
    Ok(f_shift.iter().zip(f_psi).map(|(a, b)| (a - b) / delta).collect())
}

#[derive(Default)]
struct Clock(Mutex<Duration>);

impl Clock {
    fn time<T>(&self, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.0.lock().unwrap() += start.elapsed();
        out
    }

    fn seconds(&self) -> f64 {
        self.0.lock().unwrap().as_secs_f64()
    }
}

#[derive(Default)]
struct Timers {
    pcsetup: Clock,
    pcapply: Clock,
    ksp: Clock,
    func: Clock,
    jac: Clock,
    ls: Clock,
    mf: Clock,
}

struct TimedPreconditioner<'a> {
    inner: &'a dyn Preconditioner,
    clock: &'a Clock,
}

impl Preconditioner for TimedPreconditioner<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        self.clock.time(|| self.inner.apply(r))
    }
}

/// Result of a Newton solve: the final state, its report, and `||F||`
/// after every accepted step (entry 0 is the initial residual).
#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub state: EigenState,
    pub report: ConvergenceReport,
    pub residual_history: Vec<f64>,
}

struct NewtonRun {
    psi: Vec<f64>,
    history: Vec<f64>,
    gmres_its: usize,
    converged: bool,
}

fn newton_loop(
    residual: &dyn NonlinearResidual,
    pc: &dyn Preconditioner,
    mut psi: Vec<f64>,
    opts: &SolverOptions,
    timers: &Timers,
) -> Result<NewtonRun> {
    let gmres = opts.gmres();
    let mut f = timers.func.time(|| residual.eval(&psi))?;
    let mut f_norm = norm2(&f);
    let tol = (opts.newton_rtol * f_norm).max(opts.newton_atol);
    let mut history = vec![f_norm];
    let mut gmres_its = 0;
    let n = residual.dim();

    for iteration in 1..=opts.max_newton {
        if f_norm <= tol {
            return Ok(NewtonRun { psi, history, gmres_its, converged: true });
        }
        let (base_psi, base_f) = timers.jac.time(|| (psi.clone(), f.clone()));
        let jacobian = FnOperator::new(n, |v: &[f64]| {
            timers.mf.time(|| jfnk_matvec(residual, &base_psi, &base_f, v, opts.fd_delta))
        });
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let step = timers.ksp.time(|| match gmres_solve(&jacobian, pc, &rhs, None, &gmres) {
            Ok(out) => Ok((out.x, out.iterations)),
            Err(Error::GmresStagnation { iterations, best, .. }) => Ok((best, iterations)),
            Err(e) => Err(e),
        });
        let (dx, its) = step?;
        gmres_its += its;

        let accepted = timers.ls.time(|| -> Result<Option<(Vec<f64>, Vec<f64>, f64)>> {
            let ls = &opts.line_search;
            let mut alpha = 1.0;
            for _ in 0..=ls.max_halvings {
                let trial: Vec<f64> = psi.iter().zip(&dx).map(|(p, d)| p + alpha * d).collect();
                let f_trial = timers.func.time(|| residual.eval(&trial));
                if let Ok(f_trial) = f_trial {
                    let norm = norm2(&f_trial);
                    if norm * norm <= (1.0 - 2.0 * ls.armijo * alpha) * f_norm * f_norm {
                        return Ok(Some((trial, f_trial, norm)));
                    }
                }
                alpha *= ls.factor;
            }
            Ok(None)
        })?;
        match accepted {
            Some((p, fv, norm)) => {
                psi = p;
                f = fv;
                f_norm = norm;
                history.push(f_norm);
            }
            None => {
                return Err(Error::LineSearch {
                    iteration,
                    min_step: opts.line_search.factor.powi(opts.line_search.max_halvings as i32),
                })
            }
        }
    }
    let converged = f_norm <= tol;
    Ok(NewtonRun { psi, history, gmres_its, converged })
}

/// Inexact Newton with backtracking on an arbitrary residual, starting
/// from `psi0`. Returns the final iterate and `||F||` history.
pub fn newton_iterate(
    residual: &dyn NonlinearResidual,
    pc: &dyn Preconditioner,
    psi0: Vec<f64>,
    opts: &SolverOptions,
) -> Result<(Vec<f64>, Vec<f64>)> {
    opts.validate()?;
    let timers = Timers::default();
    let run = newton_loop(residual, pc, psi0, opts, &timers)?;
    if !run.converged {
        return Err(Error::NewtonNotConverged {
            max: opts.max_newton,
            report: Box::new(ConvergenceReport {
                iter_newton: run.history.len() - 1,
                final_residual_norm: *run.history.last().unwrap(),
                ..Default::default()
            }),
        });
    }
    Ok((run.psi, run.history))
}

/// Computes the fundamental mode: the preconditioner is built by
/// `build_pc`, `n_initial_power` inverse power iterations give the initial
/// guess, then Jacobian-free Newton converges `F(ψ) = 0`.
///
/// With `layout` given, the result is signed so that the mean scalar flux
/// of group 0 is positive; otherwise so that the entry sum is positive.
pub fn newton_solve<'p>(
    problem: &dyn EigenProblem,
    build_pc: impl FnOnce() -> Result<Box<dyn Preconditioner + 'p>>,
    psi0: Option<Vec<f64>>,
    layout: Option<(&BlockLayout, &[f64])>,
    opts: &SolverOptions,
) -> Result<NewtonOutcome> {
    opts.validate()?;
    let start = Instant::now();
    let timers = Timers::default();
    let n = problem.dim();
    let psi0 = psi0.unwrap_or_else(|| vec![1.0; n]);
    if psi0.len() != n {
        return Err(Error::dim("initial guess", n, psi0.len()));
    }

    let pc = timers.ksp.time(|| timers.pcsetup.time(build_pc))?;
    if pc.dim() != n {
        return Err(Error::dim("preconditioner", n, pc.dim()));
    }
    let timed_pc = TimedPreconditioner {
        inner: pc.as_ref(),
        clock: &timers.pcapply,
    };

    let mut psi = psi0;
    if opts.n_initial_power > 0 {
        let state = EigenState { psi, k: 0.0 };
        let (state, _) = timers
            .ksp
            .time(|| inverse_power_iterate(problem, state, opts.n_initial_power, &timed_pc, &opts.gmres()))?;
        psi = state.psi;
    }

    let residual = EigenResidual { problem };
    let run = newton_loop(&residual, &timed_pc, psi, opts, &timers)?;
    let NewtonRun { mut psi, history, gmres_its, converged } = run;

    let sign = match layout {
        Some((layout, weights)) => {
            let n_space = layout.n_space;
            let mut phi0 = 0.0;
            for d in 0..layout.n_directions {
                let r = layout.block_range(layout.block_index(0, d));
                phi0 += weights[d] * psi[r].iter().sum::<f64>();
            }
            phi0 / n_space as f64
        }
        None => psi.iter().sum::<f64>(),
    };
    if sign < 0.0 {
        psi.iter_mut().for_each(|v| *v = -*v);
    }
    let final_k = norm2(&problem.apply_b(&psi)?);

    let iter_newton = history.len() - 1;
    let total = start.elapsed().as_secs_f64();
    let report = ConvergenceReport {
        iter_newton,
        iter_gmres_avg: if iter_newton > 0 { gmres_its as f64 / iter_newton as f64 } else { 0.0 },
        time_pcsetup: to_millis(timers.pcsetup.seconds()),
        time_pcapply: to_millis(timers.pcapply.seconds()),
        time_ksp: to_millis(timers.ksp.seconds()),
        time_total: to_millis(total),
        time_func: to_millis(timers.func.seconds()),
        time_jac: to_millis(timers.jac.seconds() + timers.pcsetup.seconds()),
        time_ls: to_millis(timers.ls.seconds()),
        time_mf: to_millis(timers.mf.seconds()),
        final_k,
        final_residual_norm: *history.last().unwrap(),
    };
    if !converged {
        return Err(Error::NewtonNotConverged {
            max: opts.max_newton,
            report: Box::new(report),
        });
    }
    Ok(NewtonOutcome {
        state: EigenState { psi, k: final_k },
        report,
        residual_history: history,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::MatrixPencil;
    use crate::operator::IdentityPreconditioner;
    use crate::sparse::CsrMatrix;

    fn scaled_identities(n: usize) -> MatrixPencil {
        let mut b = CsrMatrix::identity(n);
        b.scale(2.0);
        MatrixPencil::new(CsrMatrix::identity(n), b).unwrap()
    }

    #[test]
    fn residual_of_scaled_identities() {
        let p = scaled_identities(2);
        let r = EigenResidual { problem: &p };
        let f = r.eval(&[0.6, 0.8]).unwrap();
        assert!(norm2(&f) < 1e-15);
        let f = r.eval(&[1.2, 1.6]).unwrap();
        assert!((f[0] - 0.6).abs() < 1e-15 && (f[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn zero_fission_is_an_error() {
        let p = MatrixPencil::new(CsrMatrix::identity(2), CsrMatrix::zeros(2, 2)).unwrap();
        assert!(matches!(EigenResidual { problem: &p }.eval(&[1.0, 1.0]), Err(Error::NoFission)));
    }

    #[test]
    fn zero_direction_is_rejected() {
        let p = scaled_identities(2);
        let r = EigenResidual { problem: &p };
        let f = r.eval(&[1.0, 1.0]).unwrap();
        assert!(matches!(
            jfnk_matvec(&r, &[1.0, 1.0], &f, &[0.0, 0.0], FdDelta::Standard),
            Err(Error::DegenerateDirection(_))
        ));
    }

    #[test]
    fn diagonal_pencil_finds_dominant_mode() {
        // A = diag(1,2,4), B = I: k = largest of 1/a_i = 1.
        let a = CsrMatrix::from_diagonal(&[1.0, 2.0, 4.0]);
        let p = MatrixPencil::new(a, CsrMatrix::identity(3)).unwrap();
        let opts = SolverOptions { newton_rtol: 1e-10, ..Default::default() };
        let out = newton_solve(&p, || Ok(Box::new(IdentityPreconditioner(3))), None, None, &opts).unwrap();
        assert!((out.state.k - 1.0).abs() < 1e-8, "k = {}", out.state.k);
        assert!(out.report.timing_containment_holds());
        for w in out.residual_history.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }
}
