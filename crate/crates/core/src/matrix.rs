//! Dense positive matrices with cached row and column sums.
//!
//! The doubly indexed array of positive reals is the single input object for
//! everything in this crate; its row sums and column sums appear so often
//! that they are computed once at construction and kept alongside the
//! entries.

use alloc::vec::Vec;

use crate::{Error, Result};

/// An m×n matrix of strictly positive, finite entries (row-major storage).
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
    row_sums: Vec<f64>,
    col_sums: Vec<f64>,
}

impl PositiveMatrix {
    /// Builds a matrix from row-major entries.
    ///
    /// Rejects empty shapes, length mismatches, and entries that are not
    /// strictly positive finite numbers. As an internal consistency check
    /// the row-sum and column-sum totals must agree to a relative 1e-13,
    /// which positive summation always satisfies.
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix("shape must have at least one row and one column"));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidMatrix("entry count does not match the shape"));
        }
        if entries.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::InvalidMatrix("entries must be strictly positive and finite"));
        }
        let mut row_sums = alloc::vec![0.0; rows];
        let mut col_sums = alloc::vec![0.0; cols];
        for i in 0..rows {
            for j in 0..cols {
                let x = entries[i * cols + j];
                row_sums[i] += x;
                col_sums[j] += x;
            }
        }
        let by_rows: f64 = row_sums.iter().sum();
        let by_cols: f64 = col_sums.iter().sum();
        if (by_rows - by_cols).abs() > 1e-13 * by_rows.abs() {
            return Err(Error::InvalidMatrix("row and column totals disagree"));
        }
        Ok(Self {
            rows,
            cols,
            entries,
            row_sums,
            col_sums,
        })
    }

    /// Builds a matrix from explicit rows, all of which must share a length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::InvalidMatrix("shape must have at least one row and one column"));
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("rows must all have the same length"));
        }
        let mut entries = Vec::with_capacity(m * n);
        for row in rows {
            entries.extend_from_slice(row);
        }
        Self::new(m, n, entries)
    }

    /// Number of rows (m).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns (n).
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of entries (m·n).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// A matrix is never empty; this exists for the conventional pairing
    /// with [`len`](Self::len).
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The entry at (i, j), 0-indexed. Panics when out of bounds.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.entries[i * self.cols + j]
    }

    /// All entries in row-major order.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Row sums (length m); strictly positive.
    pub fn row_sums(&self) -> &[f64] {
        &self.row_sums
    }

    /// Column sums (length n); strictly positive.
    pub fn col_sums(&self) -> &[f64] {
        &self.col_sums
    }

    /// Sum of all entries.
    pub fn total(&self) -> f64 {
        self.row_sums.iter().sum()
    }

    /// Iterator over rows as slices.
    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.cols)
    }

    /// The j-th column, gathered into a vector.
    pub fn col(&self, j: usize) -> Vec<f64> {
        assert!(j < self.cols, "column index out of bounds");
        (0..self.rows).map(|i| self.entries[i * self.cols + j]).collect()
    }

    /// A copy with every entry multiplied by `factor` (> 0, finite).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidMatrix("scale factor must be strictly positive and finite"));
        }
        let entries = self.entries.iter().map(|&x| x * factor).collect();
        Self::new(self.rows, self.cols, entries)
    }
}
