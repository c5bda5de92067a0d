use crate::error::{Error, Result};
use crate::linalg::{dot, norm, LinearOperator, Preconditioner, SolveOutcome, SolverOptions};

/// Preconditioned conjugate gradients for symmetric positive definite systems.
///
/// Starts from `x = 0`; stops when `||b - A x||_2 <= rel_tol * ||b||_2`.
pub fn pcg_solve<A, P>(a: &A, p: &P, rhs: &[f64], opts: &SolverOptions) -> Result<SolveOutcome>
where
    A: LinearOperator + ?Sized,
    P: Preconditioner + ?Sized,
{
    let n = a.dim();
    for got in [p.dim(), rhs.len()] {
        if got != n {
            return Err(Error::DimensionMismatch { expected: n, got });
        }
    }
    let mut x = vec![0.0; n];
    let mut r = rhs.to_vec();
    let b_norm = norm(rhs);
    let mut history = vec![b_norm];
    if b_norm == 0.0 {
        return Ok(SolveOutcome {
            solution: x,
            iterations: 0,
            residual_history: history,
        });
    }
    let target = opts.rel_tol * b_norm;
    let mut z = vec![0.0; n];
    p.apply(&r, &mut z);
    let mut d = z.clone();
    let mut rz = dot(&r, &z);
    let mut ad = vec![0.0; n];

    for iter in 1..=opts.max_iter {
        a.apply(&d, &mut ad);
        let curvature = dot(&d, &ad);
        if !(curvature > 0.0) {
            return Err(Error::InvalidArgument(
                "operator is not positive definite".into(),
            ));
        }
        let alpha = rz / curvature;
        for i in 0..n {
            x[i] += alpha * d[i];
            r[i] -= alpha * ad[i];
        }
        let r_norm = norm(&r);
        history.push(r_norm);
        if r_norm <= target {
            return Ok(SolveOutcome {
                solution: x,
                iterations: iter,
                residual_history: history,
            });
        }
        p.apply(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            d[i] = z[i] + beta * d[i];
        }
    }
    Err(Error::NotConverged {
        solver: "pcg",
        iterations: opts.max_iter,
        residual: history.last().copied().unwrap_or(0.0) / b_norm,
    })
}
