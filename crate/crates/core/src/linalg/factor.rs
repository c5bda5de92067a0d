use faer::linalg::solvers::Solve;
use faer::sparse::linalg::LltError;
use faer::sparse::{SparseColMat, Triplet};
use faer::{MatMut, Side};

use crate::error::{Error, Result};
use crate::linalg::{CsrMatrix, Preconditioner};

/// Sparse Cholesky factorization `A = L L^T` of a symmetric positive definite matrix.
pub struct SpdFactor {
    dim: usize,
    llt: faer::sparse::linalg::solvers::Llt<usize, f64>,
}

impl std::fmt::Debug for SpdFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpdFactor").field("dim", &self.dim).finish()
    }
}

/// Factorizes `a`, reading only its lower triangle.
pub fn factorize_spd(a: &CsrMatrix) -> Result<SpdFactor> {
    let n = a.dim();
    let mut triplets = Vec::with_capacity(a.nnz() / 2 + n);
    for i in 0..n {
        for (j, v) in a.row(i) {
            if j <= i {
                // row i of a symmetric CSR matrix is column i
                triplets.push(Triplet::new(i, j, v));
            }
        }
    }
    let lower = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
        .map_err(|e| Error::Factorization(format!("{e:?}")))?;
    let llt = lower.sp_cholesky(Side::Lower).map_err(|e| match e {
        LltError::Numeric(inner) => {
            Error::Factorization(format!("matrix is not positive definite ({inner:?})"))
        }
        LltError::Generic(inner) => Error::Factorization(format!("{inner:?}")),
    })?;
    Ok(SpdFactor { dim: n, llt })
}

impl SpdFactor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        assert_eq!(rhs.len(), self.dim, "right-hand side has the wrong length");
        if self.dim == 0 {
            return;
        }
        let view = MatMut::from_column_major_slice_mut(rhs, self.dim, 1);
        self.llt.solve_in_place(view);
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

impl Preconditioner for SpdFactor {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
        self.solve_in_place(z);
    }
}
