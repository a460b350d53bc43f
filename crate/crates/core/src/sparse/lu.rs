use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::CsrMatrix;

/// Direct solver that splits the matrix into the connected components of
/// its (symmetrized) sparsity graph and keeps a dense LU factorization per
/// component. Block-diagonal transport operators factor block by block.
#[derive(Debug, Clone)]
pub struct ComponentLu {
    n: usize,
    components: Vec<Component>,
}

#[derive(Debug, Clone)]
struct Component {
    indices: Vec<usize>,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

impl ComponentLu {
    /// `label` names the matrix in singular-pivot errors.
    pub fn factor(a: &CsrMatrix, label: &str) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidInput(format!(
                "LU needs a square matrix, got {}x{}",
                a.n_rows(),
                a.n_cols()
            )));
        }
        let n = a.n_rows();
        let mut parent: Vec<usize> = (0..n).collect();
        for (i, j, _) in a.triplets() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
        let mut comp_of_root = vec![usize::MAX; n];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            if comp_of_root[r] == usize::MAX {
                comp_of_root[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[comp_of_root[r]].push(i);
        }

        let components = groups
            .into_par_iter()
            .map(|indices| {
                let m = indices.len();
                let mut local = std::collections::HashMap::with_capacity(m);
                for (q, &i) in indices.iter().enumerate() {
                    local.insert(i, q);
                }
                let mut dense = DMatrix::<f64>::zeros(m, m);
                for (p, &i) in indices.iter().enumerate() {
                    let (cols, vals) = a.row(i);
                    for (&j, &v) in cols.iter().zip(vals) {
                        dense[(p, local[&j])] = v;
                    }
                }
                let scale = dense.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
                let lu = dense.lu();
                let u = lu.u();
                let min_pivot = (0..m).map(|k| u[(k, k)].abs()).fold(f64::INFINITY, f64::min);
                if scale == 0.0 || min_pivot <= 1e-14 * scale {
                    return Err(Error::Singular(format!(
                        "{label} (component containing row {})",
                        indices[0]
                    )));
                }
                Ok(Component { indices, lu })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ComponentLu { n, components })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn largest_component(&self) -> usize {
        self.components.iter().map(|c| c.indices.len()).max().unwrap_or(0)
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::dim("LU solve right-hand side", self.n, b.len()));
        }
        let pieces: Vec<DVector<f64>> = self
            .components
            .par_iter()
            .map(|c| {
                let mut rhs = DVector::from_iterator(c.indices.len(), c.indices.iter().map(|&i| b[i]));
                c.lu.solve_mut(&mut rhs);
                rhs
            })
            .collect();
        let mut x = vec![0.0; self.n];
        for (c, piece) in self.components.iter().zip(pieces) {
            for (&i, &v) in c.indices.iter().zip(piece.iter()) {
                x[i] = v;
            }
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_block_diagonal_system_per_component() {
        let a = CsrMatrix::from_dense(&[
            vec![4.0, 1.0, 0.0, 0.0],
            vec![1.0, 3.0, 0.0, 0.0],
            vec![0.0, 0.0, 2.0, 0.0],
            vec![0.0, 0.0, 0.0, 5.0],
        ])
        .unwrap();
        let lu = ComponentLu::factor(&a, "test").unwrap();
        assert_eq!(lu.n_components(), 3);
        let x = lu.solve(&[5.0, 4.0, 2.0, 10.0]).unwrap();
        let r = a.spmv(&x).unwrap();
        for (u, v) in r.iter().zip([5.0, 4.0, 2.0, 10.0]) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_is_reported() {
        let a = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(ComponentLu::factor(&a, "sub 3"), Err(Error::Singular(m)) if m.contains("sub 3")));
        let missing_row = CsrMatrix::from_dense(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(ComponentLu::factor(&missing_row, "x").is_err());
    }
}
