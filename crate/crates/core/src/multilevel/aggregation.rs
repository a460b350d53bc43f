use crate::error::{Error, Result};
use crate::sparse::{block_diag, BlockLayout, CsrMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aggregation {
    pub n_fine: usize,
    pub n_agg: usize,
    /// Aggregate id of each fine index.
    pub membership: Vec<usize>,
}

impl Aggregation {
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_agg];
        for (i, &a) in self.membership.iter().enumerate() {
            out[a].push(i);
        }
        out
    }
}

const UNASSIGNED: usize = usize::MAX;

/// Greedy aggregation on the strength graph
/// `{(i, j): i != j, |m_ij| >= θ sqrt(|m_ii m_jj|)}`.
///
/// Nodes are visited in index order. An unaggregated node with unaggregated
/// strong neighbours seeds a new aggregate that absorbs them. One whose
/// strong neighbours are all taken joins the aggregate of its strongest
/// neighbour; one without strong neighbours becomes a singleton.
pub fn aggregate(m: &CsrMatrix, theta: f64) -> Result<Aggregation> {
    if !m.is_square() {
        return Err(Error::InvalidMatrix("aggregation needs a square matrix".into()));
    }
    let n = m.n_rows();
    if n == 0 {
        return Err(Error::InvalidInput("cannot aggregate an empty matrix".into()));
    }
    if !(0.0..1.0).contains(&theta) {
        return Err(Error::InvalidInput(format!("strength threshold must lie in [0, 1), got {theta}")));
    }
    let abs_diag: Vec<f64> = m.diagonal().iter().map(|d| d.abs()).collect();
    let diag = &abs_diag;
    let strong = |i: usize| {
        let (cols, vals) = m.row(i);
        cols.iter()
            .zip(vals)
            .filter(move |(&j, &v)| j != i && v.abs() >= theta * (diag[i] * diag[j]).sqrt())
            .map(|(&j, &v)| (j, v.abs()))
    };

    let mut membership = vec![UNASSIGNED; n];
    let mut n_agg = 0;
    for i in 0..n {
        if membership[i] != UNASSIGNED {
            continue;
        }
        let free: Vec<usize> = strong(i).map(|(j, _)| j).filter(|&j| membership[j] == UNASSIGNED).collect();
        if !free.is_empty() {
            membership[i] = n_agg;
            for j in free {
                membership[j] = n_agg;
            }
            n_agg += 1;
            continue;
        }
        let best = strong(i).fold(None, |acc: Option<(usize, f64)>, (j, v)| match acc {
            Some((_, bv)) if bv >= v => acc,
            _ => Some((j, v)),
        });
        match best {
            Some((j, _)) => membership[i] = membership[j],
            None => {
                membership[i] = n_agg;
                n_agg += 1;
            }
        }
    }
    Ok(Aggregation {
        n_fine: n,
        n_agg,
        membership,
    })
}

/// Piecewise-constant interpolation `Ĩ[i, agg(i)] = 1`.
pub fn build_sub_interpolation(agg: &Aggregation) -> CsrMatrix {
    let row_ptr = (0..=agg.n_fine).collect();
    CsrMatrix::new(agg.n_fine, agg.n_agg, row_ptr, agg.membership.clone(), vec![1.0; agg.n_fine])
        .expect("one entry per row is valid CSR")
}

/// Replicates `Ĩ` across every block: `I = Σ_j R_(j)^T Ĩ R_(j)`.
pub fn extend_interpolation(sub: &CsrMatrix, fine: &BlockLayout, coarse: &BlockLayout) -> Result<CsrMatrix> {
    if fine.n_blocks() != coarse.n_blocks() || fine.n_groups != coarse.n_groups {
        return Err(Error::dim("interpolation block count", fine.n_blocks(), coarse.n_blocks()));
    }
    if sub.n_rows() != fine.n_space {
        return Err(Error::dim("sub-interpolation rows", fine.n_space, sub.n_rows()));
    }
    if sub.n_cols() != coarse.n_space {
        return Err(Error::dim("sub-interpolation columns", coarse.n_space, sub.n_cols()));
    }
    Ok(block_diag(&vec![sub.clone(); fine.n_blocks()]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
            }
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, n, t).unwrap()
    }

    #[test]
    fn diagonal_gives_singletons() {
        let a = aggregate(&CsrMatrix::from_diagonal(&[1.0, 2.0, 3.0]), 0.1).unwrap();
        assert_eq!(a.n_agg, 3);
        assert_eq!(build_sub_interpolation(&a), CsrMatrix::identity(3));
    }

    #[test]
    fn laplacian_pairs() {
        let a = aggregate(&laplacian(6), 0.25).unwrap();
        assert_eq!(a.members(), vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
    }

    #[test]
    fn isolated_leftover_joins_strongest_neighbour() {
        let a = aggregate(&laplacian(5), 0.25).unwrap();
        assert_eq!(a.members(), vec![vec![0, 1], vec![2, 3, 4]]);
    }

    #[test]
    fn zero_threshold_dense_is_one_aggregate() {
        let dense = vec![vec![1.0, 0.1, 0.2], vec![0.3, 1.0, 0.4], vec![0.5, 0.6, 1.0]];
        let a = aggregate(&CsrMatrix::from_dense(&dense).unwrap(), 0.0).unwrap();
        assert_eq!(a.n_agg, 1);
    }

    #[test]
    fn interpolation_column_sums() {
        let agg = Aggregation { n_fine: 3, n_agg: 2, membership: vec![0, 0, 1] };
        let i = build_sub_interpolation(&agg);
        assert_eq!(i.to_dense(), vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn extension_replicates_blocks() {
        let sub = CsrMatrix::from_dense(&[vec![1.0], vec![1.0]]).unwrap();
        let fine = BlockLayout::new(1, 2, 2);
        let ext = extend_interpolation(&sub, &fine, &fine.with_space(1)).unwrap();
        assert_eq!(
            ext.to_dense(),
            vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 1.0]]
        );
        let single = BlockLayout::new(1, 1, 2);
        assert_eq!(extend_interpolation(&sub, &single, &single.with_space(1)).unwrap(), sub);
        assert!(extend_interpolation(&sub, &fine, &BlockLayout::new(1, 1, 1)).is_err());
    }
}
