use crate::error::{Error, Result};
use crate::linalg::{factorize_spd, CsrMatrix, LinearOperator, Preconditioner, SpdFactor};

/// Galerkin system of one harmonic `k >= 1`:
///
/// ```text
/// [ k w M    K    ] [u_s]   [f_c]
/// [   K   -k w M  ] [u_c] = [f_s]
/// ```
///
/// Symmetric and indefinite. Unknowns are stacked sine part first, then cosine part.
#[derive(Debug, Clone)]
pub struct BlockSystem<'a> {
    k: usize,
    omega: f64,
    mass: &'a CsrMatrix,
    stiffness: &'a CsrMatrix,
    rhs: Vec<f64>,
}

impl<'a> BlockSystem<'a> {
    pub fn new(
        k: usize,
        omega: f64,
        mass: &'a CsrMatrix,
        stiffness: &'a CsrMatrix,
        load_c: &[f64],
        load_s: &[f64],
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "the block system needs a mode index k >= 1".into(),
            ));
        }
        if !(omega > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "frequency must be positive, got {omega}"
            )));
        }
        let n = mass.dim();
        for got in [stiffness.dim(), load_c.len(), load_s.len()] {
            if got != n {
                return Err(Error::DimensionMismatch { expected: n, got });
            }
        }
        let mut rhs = Vec::with_capacity(2 * n);
        rhs.extend_from_slice(load_c);
        rhs.extend_from_slice(load_s);
        Ok(BlockSystem {
            k,
            omega,
            mass,
            stiffness,
            rhs,
        })
    }

    pub fn mode(&self) -> usize {
        self.k
    }

    /// `k * omega`
    pub fn frequency(&self) -> f64 {
        self.k as f64 * self.omega
    }

    /// Unknowns per block.
    pub fn block_dim(&self) -> usize {
        self.mass.dim()
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Splits a stacked vector into its (cosine, sine) parts.
    pub fn split<'v>(&self, stacked: &'v [f64]) -> (&'v [f64], &'v [f64]) {
        let (s, c) = stacked.split_at(self.block_dim());
        (c, s)
    }

    /// `k w M + K`, the diagonal block of the preconditioner.
    pub fn preconditioner_block(&self) -> Result<CsrMatrix> {
        self.mass
            .linear_combination(self.frequency(), self.stiffness, 1.0)
    }
}

impl LinearOperator for BlockSystem<'_> {
    fn dim(&self) -> usize {
        2 * self.block_dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.block_dim();
        let kw = self.frequency();
        let (xs, xc) = x.split_at(n);
        let (y1, y2) = y.split_at_mut(n);
        let mut mxs = vec![0.0; n];
        let mut mxc = vec![0.0; n];
        self.mass.matvec(xs, &mut mxs);
        self.mass.matvec(xc, &mut mxc);
        self.stiffness.matvec(xc, y1);
        self.stiffness.matvec(xs, y2);
        for i in 0..n {
            y1[i] += kw * mxs[i];
            y2[i] -= kw * mxc[i];
        }
    }
}

/// `diag(k w M + K, k w M + K)` applied through one sparse Cholesky factor.
#[derive(Debug)]
pub struct BlockDiagonalPreconditioner {
    factor: SpdFactor,
}

impl BlockDiagonalPreconditioner {
    pub fn new(system: &BlockSystem<'_>) -> Result<Self> {
        let block = system.preconditioner_block()?;
        Ok(BlockDiagonalPreconditioner {
            factor: factorize_spd(&block)?,
        })
    }

    pub fn from_factor(factor: SpdFactor) -> Self {
        BlockDiagonalPreconditioner { factor }
    }

    pub fn factor(&self) -> &SpdFactor {
        &self.factor
    }
}

impl Preconditioner for BlockDiagonalPreconditioner {
    fn dim(&self) -> usize {
        2 * self.factor.dim()
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
        let n = self.factor.dim();
        let (z1, z2) = z.split_at_mut(n);
        self.factor.solve_in_place(z1);
        self.factor.solve_in_place(z2);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small_pair() -> (CsrMatrix, CsrMatrix) {
        let m = CsrMatrix::from_triplets(
            3,
            &[
                (0, 0, 2.0),
                (0, 1, 0.5),
                (1, 0, 0.5),
                (1, 1, 2.0),
                (2, 2, 1.0),
            ],
        )
        .unwrap();
        let k = CsrMatrix::from_triplets(
            3,
            &[
                (0, 0, 3.0),
                (0, 2, -1.0),
                (2, 0, -1.0),
                (1, 1, 2.0),
                (2, 2, 4.0),
            ],
        )
        .unwrap();
        (m, k)
    }

    #[test]
    fn operator_is_symmetric_and_indefinite() {
        let (m, k) = small_pair();
        let sys = BlockSystem::new(2, 0.7, &m, &k, &[0.0; 3], &[0.0; 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut saw_positive = false;
        let mut saw_negative = false;
        for _ in 0..50 {
            let x: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let y: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut ax = vec![0.0; 6];
            let mut ay = vec![0.0; 6];
            sys.apply(&x, &mut ax);
            sys.apply(&y, &mut ay);
            let lhs: f64 = ax.iter().zip(&y).map(|(a, b)| a * b).sum();
            let rhs: f64 = x.iter().zip(&ay).map(|(a, b)| a * b).sum();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
            let q: f64 = ax.iter().zip(&x).map(|(a, b)| a * b).sum();
            saw_positive |= q > 0.0;
            saw_negative |= q < 0.0;
        }
        assert!(saw_positive && saw_negative);
    }

    #[test]
    fn rejects_bad_input() {
        let (m, k) = small_pair();
        assert!(BlockSystem::new(0, 1.0, &m, &k, &[0.0; 3], &[0.0; 3]).is_err());
        assert!(BlockSystem::new(1, 1.0, &m, &k, &[0.0; 2], &[0.0; 3]).is_err());
        let i4 = CsrMatrix::identity(4);
        assert!(matches!(
            BlockSystem::new(1, 1.0, &m, &i4, &[0.0; 3], &[0.0; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn preconditioner_solves_each_block() {
        let (m, k) = small_pair();
        let sys = BlockSystem::new(1, 2.0, &m, &k, &[0.0; 3], &[0.0; 3]).unwrap();
        let p = BlockDiagonalPreconditioner::new(&sys).unwrap();
        let block = sys.preconditioner_block().unwrap();
        let z_true = [1.0, -2.0, 0.5, 3.0, 0.0, -1.0];
        let mut r = block.mul_vec(&z_true[..3]);
        r.extend(block.mul_vec(&z_true[3..]));
        let mut z = vec![0.0; 6];
        p.apply(&r, &mut z);
        for (a, b) in z.iter().zip(z_true) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
