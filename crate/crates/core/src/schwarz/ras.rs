use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::Preconditioner;
use crate::sparse::{extract_submatrix, restrict, BlockLayout, ComponentLu, CsrMatrix, IndexSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalSolverKind {
    /// Forward SOR sweeps from a zero initial guess.
    Sor { sweeps: usize, omega: f64 },
    Lu,
}

impl Default for LocalSolverKind {
    fn default() -> Self {
        LocalSolverKind::Sor { sweeps: 2, omega: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SchwarzOptions {
    /// Overlap layers δ grown over the matrix pattern.
    pub overlap: usize,
    pub local_solver: LocalSolverKind,
}

/// Grows each set by `delta` rounds of adding every column reachable
/// through a nonzero of `p`.
pub fn build_overlap(p: &CsrMatrix, sets: &[IndexSet], delta: usize) -> Result<Vec<IndexSet>> {
    if !p.is_square() {
        return Err(Error::InvalidMatrix("overlap needs a square matrix".into()));
    }
    let n = p.n_rows();
    sets.par_iter()
        .map(|set| {
            set.check_bound(n)?;
            let mut member = vec![false; n];
            let mut frontier: Vec<usize> = set.as_slice().to_vec();
            for &i in &frontier {
                member[i] = true;
            }
            for _ in 0..delta {
                let mut next = Vec::new();
                for &i in &frontier {
                    for &c in p.row(i).0 {
                        if !member[c] {
                            member[c] = true;
                            next.push(c);
                        }
                    }
                }
                if next.is_empty() {
                    break;
                }
                frontier = next;
            }
            Ok(IndexSet::from_sorted((0..n).filter(|&i| member[i]).collect())?)
        })
        .collect()
}

/// Owner of every unknown when spatial owners are replicated across all
/// blocks of `layout`.
pub fn unknown_owner(space_owner: &[usize], layout: &BlockLayout) -> Result<Vec<usize>> {
    if space_owner.len() != layout.n_space {
        return Err(Error::dim("spatial owner map", layout.n_space, space_owner.len()));
    }
    Ok((0..layout.n_blocks()).flat_map(|_| space_owner.iter().copied()).collect())
}

#[derive(Debug, Clone)]
enum LocalSolver {
    Sor {
        a: CsrMatrix,
        diag_inv: Vec<f64>,
        sweeps: usize,
        omega: f64,
    },
    Lu(ComponentLu),
}

impl LocalSolver {
    fn new(a: CsrMatrix, kind: LocalSolverKind, label: &str) -> Result<Self> {
        match kind {
            LocalSolverKind::Lu => Ok(LocalSolver::Lu(ComponentLu::factor(&a, label)?)),
            LocalSolverKind::Sor { sweeps, omega } => {
                if !(omega > 0.0 && omega < 2.0) {
                    return Err(Error::InvalidInput(format!("SOR omega must lie in (0, 2), got {omega}")));
                }
                let diag = a.diagonal();
                if let Some(i) = diag.iter().position(|d| *d == 0.0) {
                    return Err(Error::Singular(format!("{label}: zero diagonal at local row {i}")));
                }
                Ok(LocalSolver::Sor {
                    diag_inv: diag.iter().map(|d| 1.0 / d).collect(),
                    a,
                    sweeps,
                    omega,
                })
            }
        }
    }

    fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        match self {
            LocalSolver::Lu(lu) => lu.solve(b),
            LocalSolver::Sor { a, diag_inv, sweeps, omega } => {
                let mut x = vec![0.0; b.len()];
                for _ in 0..*sweeps {
                    for i in 0..b.len() {
                        let (cols, vals) = a.row(i);
                        let mut s = b[i];
                        for (&c, &v) in cols.iter().zip(vals) {
                            if c != i {
                                s -= v * x[c];
                            }
                        }
                        x[i] = (1.0 - omega) * x[i] + omega * s * diag_inv[i];
                    }
                }
                Ok(x)
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Subdomain {
    nonoverlap: IndexSet,
    overlap: IndexSet,
    /// Positions in `overlap` of the nonoverlapping indices.
    keep: Vec<usize>,
    solver: LocalSolver,
}

/// `e = Σ_i (R_i^0)^T (P_i^δ)^{-1} R_i^δ r`.
#[derive(Debug, Clone)]
pub struct RasPreconditioner {
    dim: usize,
    subdomains: Vec<Subdomain>,
}

impl RasPreconditioner {
    /// Subdomains from explicit nonoverlapping index sets, which must form
    /// a disjoint cover of `0..dim(p)`. Empty sets are skipped.
    pub fn new(p: &CsrMatrix, nonoverlap: Vec<IndexSet>, opts: &SchwarzOptions) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::InvalidMatrix("RAS needs a square matrix".into()));
        }
        let n = p.n_rows();
        let mut seen = vec![false; n];
        for s in &nonoverlap {
            s.check_bound(n)?;
            for i in s.iter() {
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidInput(format!("index {i} lies in more than one subdomain")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInput(format!("index {i} is not covered by any subdomain")));
        }
        let nonoverlap: Vec<IndexSet> = nonoverlap.into_iter().filter(|s| !s.is_empty()).collect();
        let overlap = build_overlap(p, &nonoverlap, opts.overlap)?;
        let subdomains = nonoverlap
            .into_par_iter()
            .zip(overlap)
            .enumerate()
            .map(|(i, (non, ovl))| {
                let local = extract_submatrix(p, &ovl)?;
                let solver = LocalSolver::new(local, opts.local_solver, &format!("subdomain {i}"))?;
                let keep = non
                    .iter()
                    .map(|g| ovl.as_slice().binary_search(&g).expect("nonoverlap within overlap"))
                    .collect();
                Ok(Subdomain {
                    nonoverlap: non,
                    overlap: ovl,
                    keep,
                    solver,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RasPreconditioner { dim: n, subdomains })
    }

    /// Subdomains from an owner id per unknown.
    pub fn from_owner(p: &CsrMatrix, owner: &[usize], n_parts: usize, opts: &SchwarzOptions) -> Result<Self> {
        if owner.len() != p.n_rows() {
            return Err(Error::dim("unknown owner map", p.n_rows(), owner.len()));
        }
        let mut sets = vec![Vec::new(); n_parts];
        for (i, &o) in owner.iter().enumerate() {
            if o >= n_parts {
                return Err(Error::IndexOutOfRange { index: o, dim: n_parts });
            }
            sets[o].push(i);
        }
        let sets = sets.into_iter().map(IndexSet::from_sorted).collect::<Result<Vec<_>>>()?;
        Self::new(p, sets, opts)
    }

    pub fn n_subdomains(&self) -> usize {
        self.subdomains.len()
    }

    pub fn nonoverlap_sets(&self) -> Vec<&IndexSet> {
        self.subdomains.iter().map(|s| &s.nonoverlap).collect()
    }

    pub fn overlap_sets(&self) -> Vec<&IndexSet> {
        self.subdomains.iter().map(|s| &s.overlap).collect()
    }
}

impl Preconditioner for RasPreconditioner {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        if r.len() != self.dim {
            return Err(Error::dim("RAS input", self.dim, r.len()));
        }
        let locals = self
            .subdomains
            .par_iter()
            .map(|s| s.solver.solve(&restrict(&s.overlap, r)?))
            .collect::<Result<Vec<_>>>()?;
        let mut e = vec![0.0; self.dim];
        for (s, x) in self.subdomains.iter().zip(&locals) {
            for (g, &pos) in s.nonoverlap.iter().zip(&s.keep) {
                e[g] = x[pos];
            }
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 4.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
            }
            if i + 1 < n {
                t.push((i, i + 1, -1.5));
            }
        }
        CsrMatrix::from_triplets(n, n, t).unwrap()
    }

    #[test]
    fn overlap_layers_on_tridiagonal() {
        let p = tridiag(8);
        let s = vec![IndexSet::new(vec![3, 4])];
        assert_eq!(build_overlap(&p, &s, 0).unwrap()[0], s[0]);
        assert_eq!(build_overlap(&p, &s, 1).unwrap()[0].as_slice(), &[2, 3, 4, 5]);
        assert_eq!(build_overlap(&p, &s, 20).unwrap()[0], IndexSet::range(0..8));
    }

    #[test]
    fn cover_is_checked() {
        let p = tridiag(4);
        let opts = SchwarzOptions::default();
        assert!(RasPreconditioner::new(&p, vec![IndexSet::new(vec![0, 1]), IndexSet::new(vec![1, 2, 3])], &opts).is_err());
        assert!(RasPreconditioner::new(&p, vec![IndexSet::new(vec![0, 1])], &opts).is_err());
    }

    #[test]
    fn diagonal_matrix_is_inverted_exactly() {
        let p = CsrMatrix::from_diagonal(&[2.0, 4.0, 5.0, 8.0]);
        let opts = SchwarzOptions { overlap: 0, local_solver: LocalSolverKind::Lu };
        let ras = RasPreconditioner::from_owner(&p, &[1, 0, 1, 2], 3, &opts).unwrap();
        assert_eq!(ras.apply(&[2.0, 4.0, 5.0, 8.0]).unwrap(), vec![1.0; 4]);
        let sor = SchwarzOptions { overlap: 0, local_solver: LocalSolverKind::Sor { sweeps: 1, omega: 1.0 } };
        let ras = RasPreconditioner::from_owner(&p, &[1, 0, 1, 2], 3, &sor).unwrap();
        assert_eq!(ras.apply(&[2.0, 4.0, 5.0, 8.0]).unwrap(), vec![1.0; 4]);
    }

    #[test]
    fn singular_subdomain_is_named() {
        let p = CsrMatrix::from_diagonal(&[1.0, 0.0]);
        let err = RasPreconditioner::from_owner(&p, &[0, 1], 2, &SchwarzOptions { overlap: 0, local_solver: LocalSolverKind::Lu })
            .unwrap_err()
            .to_string();
        assert!(err.contains("subdomain 1"), "{err}");
    }
}
