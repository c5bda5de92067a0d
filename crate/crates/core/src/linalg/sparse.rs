use crate::error::{Error, Result};
use crate::linalg::LinearOperator;

/// Square sparse matrix in compressed sparse row form, columns sorted within
/// each row and no duplicate entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a matrix from `(row, col, value)` triplets.
    ///
    /// Duplicates are summed in insertion order, so two mirrored entries that
    /// receive the same contributions in the same order are bitwise equal.
    pub fn from_triplets(dim: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut counts = vec![0usize; dim + 1];
        for &(r, c, _) in triplets {
            if r >= dim || c >= dim {
                return Err(Error::InvalidArgument(format!(
                    "triplet ({r}, {c}) outside a {dim}x{dim} matrix"
                )));
            }
            counts[r + 1] += 1;
        }
        for i in 0..dim {
            counts[i + 1] += counts[i];
        }
        // stable bucket sort by row
        let mut next = counts.clone();
        let mut bucket = vec![(0usize, 0.0f64); triplets.len()];
        for &(r, c, v) in triplets {
            bucket[next[r]] = (c, v);
            next[r] += 1;
        }

        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_ptr.push(0);
        for r in 0..dim {
            let row = &mut bucket[counts[r]..counts[r + 1]];
            row.sort_by_key(|&(c, _)| c);
            let mut i = 0;
            while i < row.len() {
                let c = row[i].0;
                let mut sum = row[i].1;
                i += 1;
                while i < row.len() && row[i].0 == c {
                    sum += row[i].1;
                    i += 1;
                }
                col_idx.push(c);
                values.push(sum);
            }
            row_ptr.push(col_idx.len());
        }
        Ok(CsrMatrix {
            dim,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn identity(dim: usize) -> Self {
        CsrMatrix {
            dim,
            row_ptr: (0..=dim).collect(),
            col_idx: (0..dim).collect(),
            values: vec![1.0; dim],
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::identity(diag.len());
        m.values.copy_from_slice(diag);
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
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

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[range.clone()].binary_search(&j) {
            Ok(pos) => self.values[range.start + pos],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut sum = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                sum += self.values[k] * x[self.col_idx[k]];
            }
            *yi = sum;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.matvec(x, &mut y);
        y
    }

    /// `alpha * self + beta * other`.
    pub fn linear_combination(
        &self,
        alpha: f64,
        other: &CsrMatrix,
        beta: f64,
    ) -> Result<CsrMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut row_ptr = Vec::with_capacity(self.dim + 1);
        let mut col_idx = Vec::with_capacity(self.nnz().max(other.nnz()));
        let mut values = Vec::with_capacity(self.nnz().max(other.nnz()));
        row_ptr.push(0);
        for i in 0..self.dim {
            let mut a = self.row(i).peekable();
            let mut b = other.row(i).peekable();
            loop {
                let entry = match (a.peek().copied(), b.peek().copied()) {
                    (Some((ca, va)), Some((cb, vb))) => {
                        if ca == cb {
                            a.next();
                            b.next();
                            (ca, alpha * va + beta * vb)
                        } else if ca < cb {
                            a.next();
                            (ca, alpha * va)
                        } else {
                            b.next();
                            (cb, beta * vb)
                        }
                    }
                    (Some((ca, va)), None) => {
                        a.next();
                        (ca, alpha * va)
                    }
                    (None, Some((cb, vb))) => {
                        b.next();
                        (cb, beta * vb)
                    }
                    (None, None) => break,
                };
                col_idx.push(entry.0);
                values.push(entry.1);
            }
            row_ptr.push(col_idx.len());
        }
        Ok(CsrMatrix {
            dim: self.dim,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Exact (bitwise) symmetry check.
    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| self.row(i).all(|(j, v)| self.get(j, i) == v))
    }

    /// Dense row-major copy; intended for small matrices and tests.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.dim]; self.dim];
        for (i, row) in dense.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        dense
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec(x, y);
    }
}
