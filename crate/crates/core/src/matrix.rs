//! Structured (zero / free-parameter) matrices and their generic rank.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Sparsity pattern of a matrix: the set of entries holding free parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeSet<(usize, usize)>,
}

impl StructuredMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        StructuredMatrix {
            rows,
            cols,
            entries: BTreeSet::new(),
        }
    }

    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut m = StructuredMatrix::new(rows, cols);
        for (r, c) in entries {
            m.set(r, c)?;
        }
        Ok(m)
    }

    pub fn set(&mut self, row: usize, col: usize) -> Result<()> {
        if row >= self.rows {
            return Err(Error::VertexOutOfRange {
                vertex: row,
                count: self.rows,
            });
        }
        if col >= self.cols {
            return Err(Error::VertexOutOfRange {
                vertex: col,
                count: self.cols,
            });
        }
        self.entries.insert((row, col));
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_set(&self, row: usize, col: usize) -> bool {
        self.entries.contains(&(row, col))
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().copied()
    }

    pub fn transpose(&self) -> StructuredMatrix {
        StructuredMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|&(r, c)| (c, r)).collect(),
        }
    }

    /// Row supports of each column.
    pub fn column_supports(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for &(r, c) in &self.entries {
            cols[c].push(r);
        }
        cols
    }

    /// Generic rank, computed as a maximum row/column matching by simple
    /// augmenting paths.
    pub fn generic_rank(&self) -> usize {
        let supports = self.column_supports();
        let columns: Vec<usize> = (0..self.cols).collect();
        rank_of_columns(&supports, &columns, self.rows)
    }

    /// Generic rank of the column submatrix `M[:, columns]`.
    pub fn column_subset_rank(&self, columns: &[usize]) -> usize {
        rank_of_columns(&self.column_supports(), columns, self.rows)
    }
}

pub(crate) fn rank_of_columns(supports: &[Vec<usize>], columns: &[usize], rows: usize) -> usize {
    let mut row_owner = vec![usize::MAX; rows];
    let mut rank = 0;
    for slot in 0..columns.len() {
        let mut visited = vec![false; rows];
        if kuhn(slot, columns, supports, &mut row_owner, &mut visited) {
            rank += 1;
        }
    }
    rank
}

fn kuhn(
    slot: usize,
    columns: &[usize],
    supports: &[Vec<usize>],
    row_owner: &mut [usize],
    visited: &mut [bool],
) -> bool {
    for &r in &supports[columns[slot]] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        if row_owner[r] == usize::MAX || kuhn(row_owner[r], columns, supports, row_owner, visited) {
            row_owner[r] = slot;
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_full_rank() {
        let m = StructuredMatrix::from_entries(3, 3, (0..3).map(|i| (i, i))).unwrap();
        assert_eq!(m.generic_rank(), 3);
    }

    #[test]
    fn shared_single_row_drops_rank() {
        let m = StructuredMatrix::from_entries(2, 2, [(0, 0), (0, 1)]).unwrap();
        assert_eq!(m.generic_rank(), 1);
        assert_eq!(m.column_subset_rank(&[1]), 1);
    }

    #[test]
    fn transpose_swaps_dimensions() {
        let m = StructuredMatrix::from_entries(2, 3, [(0, 2), (1, 0)]).unwrap();
        let t = m.transpose();
        assert_eq!((t.rows(), t.cols()), (3, 2));
        assert!(t.is_set(2, 0) && t.is_set(0, 1));
        assert_eq!(t.transpose(), m);
    }
}
