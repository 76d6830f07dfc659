//! Row-oriented numeric datasets.

use crate::error::{Error, Result};

/// An ordered collection of observations. Each row is one data point with a
/// fixed number of numeric columns. Row order is preserved exactly as
/// ingested; the Sherman interval depends on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    width: usize,
}

impl Dataset {
    /// Single-column data.
    pub fn from_column(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("dataset must contain at least one row".into()));
        }
        Ok(Dataset { values, width: 1 })
    }

    /// Two-column data (e.g. for rank-correlation statistics).
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Domain("dataset must contain at least one row".into()));
        }
        let mut values = Vec::with_capacity(pairs.len() * 2);
        for &(x, y) in pairs {
            values.push(x);
            values.push(y);
        }
        Ok(Dataset { values, width: 2 })
    }

    /// Arbitrary-width data; every row must have the same number of columns.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::Domain("dataset must contain at least one row".into()));
        };
        let width = first.len();
        if width == 0 {
            return Err(Error::Domain("rows must have at least one column".into()));
        }
        let mut values = Vec::with_capacity(rows.len() * width);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::Domain(format!(
                    "row {} has {} column(s), expected {}",
                    i,
                    row.len(),
                    width
                )));
            }
            values.extend_from_slice(row);
        }
        Ok(Dataset { values, width })
    }

    /// Number of rows.
    pub fn n(&self) -> usize {
        self.values.len() / self.width
    }

    /// Number of columns per row.
    pub fn width(&self) -> usize {
        self.width
    }

    /// One row as a slice of its columns.
    pub fn row(&self, i: usize) -> &[f64] {
        let start = i * self.width;
        &self.values[start..start + self.width]
    }

    /// Value at (row, column).
    #[inline]
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    /// First-column value of a row; most statistics operate on column 0.
    #[inline]
    pub fn first(&self, row: usize) -> f64 {
        self.values[row * self.width]
    }

    /// Iterator over rows.
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.width)
    }
}
