use crate::error::{Error, Result};
use crate::linalg::{dot, LinearOperator, Preconditioner, SolveOutcome, SolverOptions};

/// Preconditioned MINRES for symmetric (possibly indefinite) systems with a
/// symmetric positive definite preconditioner `P`.
///
/// Starts from `x = 0`. Stops once the `P^{-1}`-norm of the residual has been
/// reduced by `rel_tol`. `residual_history` holds that norm per iteration; it is
/// monotonically non-increasing.
pub fn minres_solve<A, P>(a: &A, p: &P, rhs: &[f64], opts: &SolverOptions) -> Result<SolveOutcome>
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

    let mut v_old = vec![0.0; n];
    let mut v = rhs.to_vec();
    let mut z = vec![0.0; n];
    p.apply(&v, &mut z);
    let g2 = dot(&z, &v);
    if !(g2 >= 0.0) {
        return Err(Error::InvalidArgument(
            "preconditioner is not positive definite".into(),
        ));
    }
    let gamma1 = g2.sqrt();
    if gamma1 == 0.0 {
        return Ok(SolveOutcome {
            solution: x,
            iterations: 0,
            residual_history: vec![0.0],
        });
    }
    let target = opts.rel_tol * gamma1;

    let mut gamma_old = 1.0;
    let mut gamma = gamma1;
    let mut eta = gamma1;
    let (mut c_old, mut c) = (1.0, 1.0);
    let (mut s_old, mut s) = (0.0, 0.0);
    let mut w_old = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut w_new = vec![0.0; n];
    let mut az = vec![0.0; n];
    let mut history = vec![gamma1];

    for iter in 1..=opts.max_iter {
        for zi in z.iter_mut() {
            *zi /= gamma;
        }
        a.apply(&z, &mut az);
        let delta = dot(&az, &z);
        // v_new = A z - (delta/gamma) v - (gamma/gamma_old) v_old, stored in v_old
        for i in 0..n {
            v_old[i] = az[i] - (delta / gamma) * v[i] - (gamma / gamma_old) * v_old[i];
        }
        std::mem::swap(&mut v, &mut v_old);
        let mut z_new = vec![0.0; n];
        p.apply(&v, &mut z_new);
        let g2 = dot(&z_new, &v);
        let gamma_new = if g2 > 0.0 { g2.sqrt() } else { 0.0 };

        let alpha0 = c * delta - c_old * s * gamma;
        let alpha1 = alpha0.hypot(gamma_new);
        let alpha2 = s * delta + c_old * c * gamma;
        let alpha3 = s_old * gamma;
        if alpha1 == 0.0 {
            return Err(Error::NotConverged {
                solver: "minres",
                iterations: iter,
                residual: eta.abs() / gamma1,
            });
        }
        let c_new = alpha0 / alpha1;
        let s_new = gamma_new / alpha1;
        for i in 0..n {
            w_new[i] = (z[i] - alpha3 * w_old[i] - alpha2 * w[i]) / alpha1;
            x[i] += c_new * eta * w_new[i];
        }
        eta *= -s_new;
        history.push(eta.abs());

        std::mem::swap(&mut w_old, &mut w);
        std::mem::swap(&mut w, &mut w_new);
        z = z_new;
        gamma_old = gamma;
        gamma = gamma_new;
        c_old = c;
        c = c_new;
        s_old = s;
        s = s_new;

        if eta.abs() <= target || gamma_new == 0.0 {
            return Ok(SolveOutcome {
                solution: x,
                iterations: iter,
                residual_history: history,
            });
        }
    }
    Err(Error::NotConverged {
        solver: "minres",
        iterations: opts.max_iter,
        residual: eta.abs() / gamma1,
    })
}
