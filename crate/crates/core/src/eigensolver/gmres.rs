//! Restarted flexible GMRES with right preconditioning.

use crate::error::{Error, Result};
use crate::operator::{LinearOperator, Preconditioner};
use crate::sparse::vector::{axpy, dot, norm2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOptions {
    pub rtol: f64,
    pub restart: usize,
    /// Total iteration budget across restarts.
    pub max_iters: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions {
            rtol: 1e-1,
            restart: 30,
            max_iters: 1000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GmresOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// True residual norm relative to `||b||`, recomputed on exit.
    pub relative_residual: f64,
}

fn check_dims(op: &dyn LinearOperator, pc: &dyn Preconditioner, b: &[f64]) -> Result<()> {
    let n = op.dim();
    if b.len() != n {
        return Err(Error::dim("gmres right-hand side", n, b.len()));
    }
    if pc.dim() != n {
        return Err(Error::dim("gmres preconditioner", n, pc.dim()));
    }
    Ok(())
}

fn residual(op: &dyn LinearOperator, b: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    let ax = op.apply(x)?;
    Ok(b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect())
}

/// Solves `op(x) = b` to `||b - op(x)|| <= rtol ||b||`. The preconditioner
/// may change between applications. A zero right-hand side returns zero.
pub fn gmres_solve(
    op: &dyn LinearOperator,
    pc: &dyn Preconditioner,
    b: &[f64],
    x0: Option<&[f64]>,
    opts: &GmresOptions,
) -> Result<GmresOutcome> {
    check_dims(op, pc, b)?;
    if !(opts.rtol > 0.0 && opts.rtol < 1.0) || opts.restart == 0 {
        return Err(Error::InvalidInput(format!(
            "gmres needs 0 < rtol < 1 and restart >= 1, got rtol={} restart={}",
            opts.rtol, opts.restart
        )));
    }
    let n = b.len();
    let b_norm = norm2(b);
    let mut x = match x0 {
        Some(x0) if x0.len() != n => return Err(Error::dim("gmres initial guess", n, x0.len())),
        Some(x0) => x0.to_vec(),
        None => vec![0.0; n],
    };
    if b_norm == 0.0 {
        return Ok(GmresOutcome {
            x: vec![0.0; n],
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let target = opts.rtol * b_norm;
    let mut r = if x.iter().all(|v| *v == 0.0) { b.to_vec() } else { residual(op, b, &x)? };
    let mut beta = norm2(&r);
    let mut best = (beta, x.clone());
    let mut total = 0;
    let m = opts.restart;

    while beta > target {
        if total >= opts.max_iters {
            return Err(Error::GmresStagnation {
                iterations: total,
                relative_residual: best.0 / b_norm,
                best: best.1,
            });
        }
        let mut v: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        let mut z: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut h = vec![vec![0.0; m]; m + 1];
        let (mut cs, mut sn) = (vec![0.0; m], vec![0.0; m]);
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        v.push(r.iter().map(|ri| ri / beta).collect());

        let mut k = 0;
        while k < m && total < opts.max_iters {
            let zk = pc.apply(&v[k])?;
            let mut w = op.apply(&zk)?;
            z.push(zk);
            for i in 0..=k {
                h[i][k] = dot(&w, &v[i]);
                axpy(-h[i][k], &v[i], &mut w);
            }
            let h_next = norm2(&w);
            h[k + 1][k] = h_next;
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let denom = h[k][k].hypot(h[k + 1][k]);
            if denom == 0.0 {
                break;
            }
            cs[k] = h[k][k] / denom;
            sn[k] = h[k + 1][k] / denom;
            h[k][k] = denom;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            k += 1;
            total += 1;
            if g[k].abs() <= target || h_next <= 1e-14 * beta {
                break;
            }
            v.push(w.iter().map(|wi| wi / h_next).collect());
        }

        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let s: f64 = (i + 1..k).map(|j| h[i][j] * y[j]).sum();
            y[i] = (g[i] - s) / h[i][i];
        }
        for (yi, zi) in y.iter().zip(&z) {
            axpy(*yi, zi, &mut x);
        }
        r = residual(op, b, &x)?;
        let new_beta = norm2(&r);
        if new_beta < best.0 {
            best = (new_beta, x.clone());
        }
        if k == 0 || (new_beta > target && new_beta >= beta * (1.0 - 1e-12)) {
            return Err(Error::GmresStagnation {
                iterations: total,
                relative_residual: best.0 / b_norm,
                best: best.1,
            });
        }
        beta = new_beta;
    }
    Ok(GmresOutcome {
        x,
        iterations: total,
        relative_residual: beta / b_norm,
    })
}
