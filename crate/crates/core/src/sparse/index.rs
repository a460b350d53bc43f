use std::ops::Range;

use crate::error::{Error, Result};

/// Sorted, duplicate-free set of global indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    /// Sorts and deduplicates the input.
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        IndexSet { indices }
    }

    /// Takes indices that are already strictly increasing.
    pub fn from_sorted(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "index set must be strictly increasing".into(),
            ));
        }
        Ok(IndexSet { indices })
    }

    pub fn range(r: Range<usize>) -> Self {
        IndexSet {
            indices: r.collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.indices.last().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    /// Fails if any index is `>= dim`.
    pub fn check_bound(&self, dim: usize) -> Result<()> {
        match self.max() {
            Some(m) if m >= dim => Err(Error::IndexOutOfRange { index: m, dim }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        IndexSet::new(iter.into_iter().collect())
    }
}

/// Field-major unknown ordering: group outermost, then direction, then the
/// spatial index. Block `j = g * n_directions + d` owns the contiguous range
/// `[j * n_space, (j + 1) * n_space)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockLayout {
    pub n_groups: usize,
    pub n_directions: usize,
    pub n_space: usize,
}

impl BlockLayout {
    pub fn new(n_groups: usize, n_directions: usize, n_space: usize) -> Self {
        BlockLayout {
            n_groups,
            n_directions,
            n_space,
        }
    }

    pub fn n_blocks(&self) -> usize {
        self.n_groups * self.n_directions
    }

    pub fn dim(&self) -> usize {
        self.n_blocks() * self.n_space
    }

    pub fn block_index(&self, g: usize, d: usize) -> usize {
        g * self.n_directions + d
    }

    pub fn block_range(&self, j: usize) -> Range<usize> {
        j * self.n_space..(j + 1) * self.n_space
    }

    pub fn global(&self, g: usize, d: usize, s: usize) -> usize {
        self.block_index(g, d) * self.n_space + s
    }

    /// Same block structure with a different spatial size (coarse levels).
    pub fn with_space(&self, n_space: usize) -> Self {
        BlockLayout { n_space, ..*self }
    }
}
