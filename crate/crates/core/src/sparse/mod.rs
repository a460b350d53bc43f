//! Sparse-matrix and vector kernels.

mod csr;
mod index;
mod lu;
pub mod mm;
mod ops;
pub mod vector;

pub use csr::{CsrMatrix, DROP_TOLERANCE};
pub use index::{BlockLayout, IndexSet};
pub use lu::ComponentLu;
pub use ops::{block_diag, block_view, check_block_diagonal, extract_submatrix, prolong_add, restrict, triple_product};
