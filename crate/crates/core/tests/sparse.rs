mod common;

use common::*;
use masm_core::sparse::{block_diag, block_view, extract_submatrix, prolong_add, restrict, triple_product};
use masm_core::{BlockLayout, CsrMatrix, IndexSet};
use proptest::prelude::*;
use rand::Rng;

fn dense_triple(interp: &[Vec<f64>], p: &[Vec<f64>]) -> Vec<Vec<f64>> {
    dense_matmul(&dense_transpose(interp), &dense_matmul(p, interp))
}

fn dense_spmv(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn triple_product_matches_dense(seed in any::<u64>(), n in 1usize..=50, nc in 1usize..=50, density in 0.05f64..0.6) {
        let mut r = rng(seed);
        let p = random_dense(&mut r, n, n, density);
        let i = random_dense(&mut r, n, nc, density);
        let got = triple_product(&CsrMatrix::from_dense(&i).unwrap(), &CsrMatrix::from_dense(&p).unwrap()).unwrap();
        let want = dense_triple(&i, &p);
        prop_assert_eq!((got.n_rows(), got.n_cols()), (nc, nc));
        prop_assert!(max_abs_diff(&got, &want) <= 1e-12 * max_abs(&want).max(1.0));
    }

    #[test]
    fn spmv_matches_dense(seed in any::<u64>(), n in 1usize..=40, m in 1usize..=40) {
        let mut r = rng(seed);
        let a = random_dense(&mut r, n, m, 0.3);
        let x = random_vec(&mut r, m);
        let y = CsrMatrix::from_dense(&a).unwrap().spmv(&x).unwrap();
        let want = dense_spmv(&a, &x);
        for (g, w) in y.iter().zip(&want) {
            prop_assert!((g - w).abs() <= 1e-13);
        }
        let at = CsrMatrix::from_dense(&a).unwrap().spmv_transpose(&y).unwrap();
        let want_t = dense_spmv(&dense_transpose(&a), &y);
        for (g, w) in at.iter().zip(&want_t) {
            prop_assert!((g - w).abs() <= 1e-12);
        }
    }

    #[test]
    fn restrict_prolong_over_a_partition_is_identity(seed in any::<u64>(), n in 1usize..=60, k in 1usize..=6) {
        let mut r = rng(seed);
        let v = random_vec(&mut r, n);
        let labels: Vec<usize> = (0..n).map(|_| r.gen_range(0..k)).collect();
        let mut out = vec![0.0; n];
        for part in 0..k {
            let s = IndexSet::new((0..n).filter(|&i| labels[i] == part).collect());
            let sub = restrict(&s, &v).unwrap();
            prolong_add(&s, &sub, &mut out).unwrap();
        }
        prop_assert_eq!(out, v);
    }

    #[test]
    fn block_view_equals_extraction(seed in any::<u64>(), nb in 1usize..=6, ns in 1usize..=12) {
        let mut r = rng(seed);
        let blocks: Vec<CsrMatrix> = (0..nb)
            .map(|_| CsrMatrix::from_dense(&random_dense(&mut r, ns, ns, 0.4)).unwrap())
            .collect();
        let p = block_diag(&blocks);
        let layout = BlockLayout::new(nb, 1, ns);
        for j in 0..nb {
            let v = block_view(&p, &layout, j).unwrap();
            let e = extract_submatrix(&p, &IndexSet::range(layout.block_range(j))).unwrap();
            prop_assert_eq!(&v, &e);
            prop_assert_eq!(&v, &blocks[j]);
        }
    }

    #[test]
    fn transpose_is_an_involution(seed in any::<u64>(), n in 1usize..=30, m in 1usize..=30) {
        let mut r = rng(seed);
        let a = CsrMatrix::from_dense(&random_dense(&mut r, n, m, 0.3)).unwrap();
        prop_assert_eq!(a.transpose().transpose(), a);
    }
}

#[test]
fn triple_product_with_identity_returns_operator() {
    let mut r = rng(3);
    let p = CsrMatrix::from_dense(&random_dense(&mut r, 12, 12, 0.5)).unwrap();
    let got = triple_product(&CsrMatrix::identity(12), &p).unwrap();
    assert!(max_abs_diff(&got, &p.to_dense()) == 0.0);
}

#[test]
fn block_view_rejects_off_block_entries() {
    let p = CsrMatrix::from_dense(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
    assert!(block_view(&p, &BlockLayout::new(2, 1, 1), 0).is_err());
}
