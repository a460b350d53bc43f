//! Index-set restriction and scatter, submatrix extraction, and the
//! Galerkin triple product.

use crate::error::{Error, Result};

use super::{BlockLayout, CsrMatrix, IndexSet};

/// Gathers `v[s[p]]` for every position `p` of `s`.
pub fn restrict(s: &IndexSet, v: &[f64]) -> Result<Vec<f64>> {
    s.check_bound(v.len())?;
    Ok(s.iter().map(|i| v[i]).collect())
}

/// Scatter-adds `sub` into `out` at the positions of `s`.
pub fn prolong_add(s: &IndexSet, sub: &[f64], out: &mut [f64]) -> Result<()> {
    if s.len() != sub.len() {
        return Err(Error::dim("prolong_add subvector", s.len(), sub.len()));
    }
    s.check_bound(out.len())?;
    for (i, &x) in s.iter().zip(sub) {
        out[i] += x;
    }
    Ok(())
}

/// `R P R^T` for the restriction `R` defined by `s`.
pub fn extract_submatrix(p: &CsrMatrix, s: &IndexSet) -> Result<CsrMatrix> {
    if !p.is_square() {
        return Err(Error::InvalidInput(format!(
            "submatrix extraction needs a square matrix, got {}x{}",
            p.n_rows(),
            p.n_cols()
        )));
    }
    s.check_bound(p.n_rows())?;
    let mut local = vec![usize::MAX; p.n_cols()];
    for (q, i) in s.iter().enumerate() {
        local[i] = q;
    }
    let mut row_ptr = Vec::with_capacity(s.len() + 1);
    let mut col_idx = Vec::new();
    let mut values = Vec::new();
    row_ptr.push(0);
    for i in s.iter() {
        let (cols, vals) = p.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            let q = local[j];
            if q != usize::MAX {
                col_idx.push(q);
                values.push(v);
            }
        }
        row_ptr.push(col_idx.len());
    }
    // `local` is monotone in the global index, so columns stay sorted.
    CsrMatrix::new(s.len(), s.len(), row_ptr, col_idx, values)
}

/// Checks that every stored entry of `p` lies inside a diagonal block.
pub fn check_block_diagonal(p: &CsrMatrix, layout: &BlockLayout) -> Result<()> {
    if p.n_rows() != layout.dim() || p.n_cols() != layout.dim() {
        return Err(Error::dim("block layout", layout.dim(), p.n_rows()));
    }
    let n = layout.n_space;
    for (i, j, _) in p.triplets() {
        if i / n != j / n {
            return Err(Error::BlockStructure { row: i, col: j });
        }
    }
    Ok(())
}

/// The `j`-th diagonal block of a block-diagonal matrix.
pub fn block_view(p: &CsrMatrix, layout: &BlockLayout, j: usize) -> Result<CsrMatrix> {
    if j >= layout.n_blocks() {
        return Err(Error::IndexOutOfRange {
            index: j,
            dim: layout.n_blocks(),
        });
    }
    if p.n_rows() != layout.dim() || p.n_cols() != layout.dim() {
        return Err(Error::dim("block layout", layout.dim(), p.n_rows()));
    }
    let range = layout.block_range(j);
    let offset = range.start;
    let mut row_ptr = Vec::with_capacity(layout.n_space + 1);
    let mut col_idx = Vec::new();
    let mut values = Vec::new();
    row_ptr.push(0);
    for i in range.clone() {
        let (cols, vals) = p.row(i);
        for (&c, &v) in cols.iter().zip(vals) {
            if !range.contains(&c) {
                return Err(Error::BlockStructure { row: i, col: c });
            }
            col_idx.push(c - offset);
            values.push(v);
        }
        row_ptr.push(col_idx.len());
    }
    CsrMatrix::new(layout.n_space, layout.n_space, row_ptr, col_idx, values)
}

/// Galerkin coarse operator `I^T P I`, formed as `P I` followed by
/// `I^T (P I)`.
pub fn triple_product(interp: &CsrMatrix, p: &CsrMatrix) -> Result<CsrMatrix> {
    if !p.is_square() {
        return Err(Error::InvalidInput("triple product needs a square operator".into()));
    }
    if interp.n_rows() != p.n_rows() {
        return Err(Error::dim("triple product interpolation rows", p.n_rows(), interp.n_rows()));
    }
    let pi = p.matmul(interp)?;
    interp.transpose().matmul(&pi)
}

/// Stacks square blocks along the diagonal.
pub fn block_diag(blocks: &[CsrMatrix]) -> CsrMatrix {
    let n_rows: usize = blocks.iter().map(CsrMatrix::n_rows).sum();
    let n_cols: usize = blocks.iter().map(CsrMatrix::n_cols).sum();
    let nnz: usize = blocks.iter().map(CsrMatrix::nnz).sum();
    let mut row_ptr = Vec::with_capacity(n_rows + 1);
    let mut col_idx = Vec::with_capacity(nnz);
    let mut values = Vec::with_capacity(nnz);
    row_ptr.push(0);
    let mut col_offset = 0;
    for b in blocks {
        for i in 0..b.n_rows() {
            let (cols, vals) = b.row(i);
            col_idx.extend(cols.iter().map(|&c| c + col_offset));
            values.extend_from_slice(vals);
            row_ptr.push(col_idx.len());
        }
        col_offset += b.n_cols();
    }
    CsrMatrix::new(n_rows, n_cols, row_ptr, col_idx, values)
        .expect("block_diag of valid blocks is valid")
}
