//! Sparse symmetric linear algebra for the per-mode systems.

mod block;
mod cg;
mod factor;
mod minres;
mod sparse;

pub use block::{BlockDiagonalPreconditioner, BlockSystem};
pub use cg::pcg_solve;
pub use factor::{factorize_spd, SpdFactor};
pub use minres::minres_solve;
pub use sparse::CsrMatrix;

/// A symmetric linear map `x -> A x`.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// A symmetric positive definite approximation `P` of an operator, applied as `z = P^{-1} r`.
pub trait Preconditioner {
    fn dim(&self) -> usize;
    fn apply(&self, r: &[f64], z: &mut [f64]);
}

pub struct IdentityPreconditioner(pub usize);

impl Preconditioner for IdentityPreconditioner {
    fn dim(&self) -> usize {
        self.0
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
    }
}

/// Diagonal scaling by the inverse of the matrix diagonal.
pub struct JacobiPreconditioner {
    inv_diag: Vec<f64>,
}

impl JacobiPreconditioner {
    pub fn new(a: &CsrMatrix) -> Self {
        JacobiPreconditioner {
            inv_diag: a.diagonal().iter().map(|d| 1.0 / d).collect(),
        }
    }
}

impl Preconditioner for JacobiPreconditioner {
    fn dim(&self) -> usize {
        self.inv_diag.len()
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        for ((zi, ri), di) in z.iter_mut().zip(r).zip(&self.inv_diag) {
            *zi = ri * di;
        }
    }
}

/// Stopping parameters shared by the Krylov solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Required reduction of the (preconditioned) residual norm.
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            rel_tol: 1e-6,
            max_iter: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub solution: Vec<f64>,
    pub iterations: usize,
    /// Residual norm estimate after each iteration, starting with the initial one.
    pub residual_history: Vec<f64>,
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
