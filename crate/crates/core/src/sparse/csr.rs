use rayon::prelude::*;

use crate::error::{Error, Result};

/// Entries with magnitude below this are never stored.
pub const DROP_TOLERANCE: f64 = 1e-300;

/// Rows per rayon task for row-parallel kernels.
const PAR_ROW_CHUNK: usize = 512;

/// Compressed sparse row matrix with sorted, duplicate-free column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a matrix from raw CSR arrays, rejecting anything that breaks
    /// the structural invariants.
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let m = CsrMatrix {
            n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        };
        m.validate()?;
        Ok(m)
    }

    /// Assembles from (row, col, value) triplets. Duplicates are summed and
    /// entries that end up below [`DROP_TOLERANCE`] are dropped.
    pub fn from_triplets<I>(n_rows: usize, n_cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut entries: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        for &(i, j, _) in &entries {
            if i >= n_rows {
                return Err(Error::IndexOutOfRange { index: i, dim: n_rows });
            }
            if j >= n_cols {
                return Err(Error::IndexOutOfRange { index: j, dim: n_cols });
            }
        }
        entries.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut row_ptr = vec![0usize; n_rows + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        let mut k = 0;
        while k < entries.len() {
            let (i, j, mut v) = entries[k];
            k += 1;
            while k < entries.len() && entries[k].0 == i && entries[k].1 == j {
                v += entries[k].2;
                k += 1;
            }
            if v.abs() >= DROP_TOLERANCE {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
            }
        }
        for i in 0..n_rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(CsrMatrix {
            n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Row-major dense input; zeros are skipped.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut trip = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::dim("from_dense row length", n_cols, row.len()));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    trip.push((i, j, v));
                }
            }
        }
        Self::from_triplets(n_rows, n_cols, trip)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        CsrMatrix {
            n_rows,
            n_cols,
            row_ptr: vec![0; n_rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        row_ptr.push(0);
        for (i, &d) in diag.iter().enumerate() {
            if d.abs() >= DROP_TOLERANCE {
                col_idx.push(i);
                values.push(d);
            }
            row_ptr.push(col_idx.len());
        }
        CsrMatrix {
            n_rows: n,
            n_cols: n,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Checks every CSR structural invariant.
    pub fn validate(&self) -> Result<()> {
        if self.row_ptr.len() != self.n_rows + 1 {
            return Err(Error::InvalidMatrix(format!(
                "row_ptr has length {}, expected {}",
                self.row_ptr.len(),
                self.n_rows + 1
            )));
        }
        if self.row_ptr[0] != 0 {
            return Err(Error::InvalidMatrix("row_ptr[0] != 0".into()));
        }
        let nnz = self.row_ptr[self.n_rows];
        if nnz != self.col_idx.len() || nnz != self.values.len() {
            return Err(Error::InvalidMatrix(format!(
                "row_ptr[n_rows] = {nnz} but col_idx/values have {}/{} entries",
                self.col_idx.len(),
                self.values.len()
            )));
        }
        for i in 0..self.n_rows {
            let (start, end) = (self.row_ptr[i], self.row_ptr[i + 1]);
            if start > end {
                return Err(Error::InvalidMatrix(format!("row_ptr decreases at row {i}")));
            }
            let cols = &self.col_idx[start..end];
            for w in cols.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::InvalidMatrix(format!(
                        "row {i}: column indices not strictly increasing"
                    )));
                }
            }
            if let Some(&last) = cols.last() {
                if last >= self.n_cols {
                    return Err(Error::InvalidMatrix(format!(
                        "row {i}: column {last} >= n_cols {}",
                        self.n_cols
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[s..e], &self.values[s..e])
    }

    /// Stored value at (i, j), zero when absent.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(0.0, |k| vals[k])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n_rows.min(self.n_cols))
            .map(|i| self.get(i, i))
            .collect()
    }

    /// y = A x
    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.n_rows];
        self.spmv_into(x, &mut y)?;
        Ok(y)
    }

    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.n_cols {
            return Err(Error::dim("spmv input", self.n_cols, x.len()));
        }
        if y.len() != self.n_rows {
            return Err(Error::dim("spmv output", self.n_rows, y.len()));
        }
        let row_dot = |i: usize| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum::<f64>()
        };
        if self.n_rows >= 2 * PAR_ROW_CHUNK {
            y.par_chunks_mut(PAR_ROW_CHUNK)
                .enumerate()
                .for_each(|(c, chunk)| {
                    let base = c * PAR_ROW_CHUNK;
                    for (k, yi) in chunk.iter_mut().enumerate() {
                        *yi = row_dot(base + k);
                    }
                });
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = row_dot(i);
            }
        }
        Ok(())
    }

    /// y = A^T x
    pub fn spmv_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_rows {
            return Err(Error::dim("transposed spmv input", self.n_rows, x.len()));
        }
        let mut y = vec![0.0; self.n_cols];
        for (i, &xi) in x.iter().enumerate() {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                y[j] += v * xi;
            }
        }
        Ok(y)
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.n_cols + 1];
        for &j in &self.col_idx {
            counts[j + 1] += 1;
        }
        for j in 0..self.n_cols {
            counts[j + 1] += counts[j];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for i in 0..self.n_rows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let p = next[j];
                col_idx[p] = i;
                values[p] = v;
                next[j] += 1;
            }
        }
        CsrMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Sparse product `self * rhs` (row-wise Gustavson with a dense
    /// accumulator; duplicate columns merge in the accumulator).
    pub fn matmul(&self, rhs: &CsrMatrix) -> Result<CsrMatrix> {
        if self.n_cols != rhs.n_rows {
            return Err(Error::dim("sparse product inner dimension", self.n_cols, rhs.n_rows));
        }
        let n_cols = rhs.n_cols;
        let row_results: Vec<(Vec<usize>, Vec<f64>)> = (0..self.n_rows)
            .into_par_iter()
            .with_min_len(PAR_ROW_CHUNK / 4)
            .map_init(
                || (vec![0.0f64; n_cols], vec![usize::MAX; n_cols]),
                |(acc, marker), i| {
                    let mut touched = Vec::new();
                    let (a_cols, a_vals) = self.row(i);
                    for (&k, &a) in a_cols.iter().zip(a_vals) {
                        let (b_cols, b_vals) = rhs.row(k);
                        for (&j, &b) in b_cols.iter().zip(b_vals) {
                            if marker[j] != i {
                                marker[j] = i;
                                acc[j] = 0.0;
                                touched.push(j);
                            }
                            acc[j] += a * b;
                        }
                    }
                    touched.sort_unstable();
                    let mut cols = Vec::with_capacity(touched.len());
                    let mut vals = Vec::with_capacity(touched.len());
                    for j in touched {
                        if acc[j].abs() >= DROP_TOLERANCE {
                            cols.push(j);
                            vals.push(acc[j]);
                        }
                    }
                    (cols, vals)
                },
            )
            .collect();

        let mut row_ptr = Vec::with_capacity(self.n_rows + 1);
        row_ptr.push(0);
        let total: usize = row_results.iter().map(|r| r.0.len()).sum();
        let mut col_idx = Vec::with_capacity(total);
        let mut values = Vec::with_capacity(total);
        for (c, v) in row_results {
            col_idx.extend(c);
            values.extend(v);
            row_ptr.push(col_idx.len());
        }
        Ok(CsrMatrix {
            n_rows: self.n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// `alpha * self + beta * other`, same shape required.
    pub fn add_scaled(&self, alpha: f64, other: &CsrMatrix, beta: f64) -> Result<CsrMatrix> {
        if self.n_rows != other.n_rows {
            return Err(Error::dim("matrix sum rows", self.n_rows, other.n_rows));
        }
        if self.n_cols != other.n_cols {
            return Err(Error::dim("matrix sum cols", self.n_cols, other.n_cols));
        }
        let trip = (0..self.n_rows).flat_map(|i| {
            let (ac, av) = self.row(i);
            let (bc, bv) = other.row(i);
            ac.iter()
                .zip(av)
                .map(move |(&j, &v)| (i, j, alpha * v))
                .chain(bc.iter().zip(bv).map(move |(&j, &v)| (i, j, beta * v)))
        });
        CsrMatrix::from_triplets(self.n_rows, self.n_cols, trip.collect::<Vec<_>>())
    }

    pub fn scale(&mut self, alpha: f64) {
        self.values.iter_mut().for_each(|v| *v *= alpha);
    }

    /// True when both matrices store exactly the same (row, col) positions.
    pub fn same_pattern(&self, other: &CsrMatrix) -> bool {
        self.n_rows == other.n_rows
            && self.n_cols == other.n_cols
            && self.row_ptr == other.row_ptr
            && self.col_idx == other.col_idx
    }

    /// Iterates stored entries as (row, col, value).
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_rows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n_cols]; self.n_rows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v;
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sparse(rng: &mut ChaCha8Rng, n: usize, m: usize, nnz: usize) -> CsrMatrix {
        let trip: Vec<_> = (0..nnz)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..m), rng.gen_range(-1.0..1.0)))
            .collect();
        CsrMatrix::from_triplets(n, m, trip).unwrap()
    }

    fn dense_mv(d: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        d.iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn spmv_identity_and_zero() {
        let y = CsrMatrix::identity(3).spmv(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(y, vec![1.0, 2.0, 3.0]);
        let z = CsrMatrix::zeros(2, 2).spmv(&[4.0, -7.0]).unwrap();
        assert_eq!(z, vec![0.0, 0.0]);
    }

    #[test]
    fn spmv_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_sparse(&mut rng, 8, 8, 20);
        a.validate().unwrap();
        let x: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y = a.spmv(&x).unwrap();
        let yd = dense_mv(&a.to_dense(), &x);
        for (u, v) in y.iter().zip(&yd) {
            assert!((u - v).abs() <= 1e-13 * v.abs().max(1.0));
        }
    }

    #[test]
    fn spmv_rejects_bad_length() {
        let a = CsrMatrix::identity(3);
        assert!(matches!(a.spmv(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn triplets_merge_and_drop() {
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 1, 1.0), (0, 1, 2.0), (1, 0, 1e-320), (1, 1, 0.0)])
            .unwrap();
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.get(0, 1), 3.0);
        a.validate().unwrap();
    }

    #[test]
    fn validate_catches_unsorted_columns() {
        let bad = CsrMatrix::new(1, 3, vec![0, 2], vec![2, 1], vec![1.0, 1.0]);
        assert!(bad.is_err());
        let out_of_range = CsrMatrix::new(1, 2, vec![0, 1], vec![2], vec![1.0]);
        assert!(out_of_range.is_err());
    }

    #[test]
    fn transpose_and_matmul_match_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_sparse(&mut rng, 7, 5, 15);
        let b = random_sparse(&mut rng, 5, 6, 12);
        let c = a.matmul(&b).unwrap();
        c.validate().unwrap();
        let (ad, bd) = (a.to_dense(), b.to_dense());
        for i in 0..7 {
            for j in 0..6 {
                let v: f64 = (0..5).map(|k| ad[i][k] * bd[k][j]).sum();
                assert!((c.get(i, j) - v).abs() < 1e-14);
            }
        }
        let at = a.transpose();
        at.validate().unwrap();
        for (i, j, v) in a.triplets() {
            assert_eq!(at.get(j, i), v);
        }
    }
}
