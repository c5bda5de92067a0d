//! Time direction: Fourier coefficients of separable data, the quarter-period
//! shift on coefficient pairs, and the truncation remainder of the source.
//!
//! For a `T`-periodic `v` with `omega = 2 pi / T`:
//!
//! ```text
//! v_0   = (1/T) int_0^T v dt
//! v_k^c = (2/T) int_0^T v cos(k omega t) dt
//! v_k^s = (2/T) int_0^T v sin(k omega t) dt
//! ```

mod functions;
mod problem;

pub use functions::{Poly2, SpatialFn, TimeFn};
pub use problem::{
    spatial_gram, ExactTail, FourierSettings, ProblemSpec, SeparableSource, SeparableTerm,
    SpatialGram, SpatialPair,
};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{dot, CsrMatrix};

/// Fourier coefficients of a scalar periodic function, for `k = 0..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeCoefficients {
    pub a0: f64,
    /// `cos[k - 1]` multiplies `cos(k omega t)`.
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TimeCoefficients {
    pub fn k_max(&self) -> usize {
        self.cos.len()
    }

    /// Cosine coefficient of harmonic `k`; `a0` for `k = 0`, zero past `k_max`.
    pub fn cos_coef(&self, k: usize) -> f64 {
        match k {
            0 => self.a0,
            k => self.cos.get(k - 1).copied().unwrap_or(0.0),
        }
    }

    pub fn sin_coef(&self, k: usize) -> f64 {
        match k {
            0 => 0.0,
            k => self.sin.get(k - 1).copied().unwrap_or(0.0),
        }
    }

    /// Partial sum up to harmonic `n`.
    pub fn eval_truncated(&self, t: f64, omega: f64, n: usize) -> f64 {
        let mut v = self.a0;
        for k in 1..=n.min(self.k_max()) {
            let (s, c) = (k as f64 * omega * t).sin_cos();
            v += self.cos[k - 1] * c + self.sin[k - 1] * s;
        }
        v
    }

    /// `T a0^2 + (T/2) sum_{k<=n} (cos_k^2 + sin_k^2)`, the squared `L2(0,T)` norm
    /// of the partial sum.
    pub fn parseval_energy(&self, period: f64, n: usize) -> f64 {
        let tail: f64 = (1..=n.min(self.k_max()))
            .map(|k| self.cos[k - 1].powi(2) + self.sin[k - 1].powi(2))
            .sum();
        period * self.a0 * self.a0 + 0.5 * period * tail
    }
}

/// Uniform sampling of one period for composite Simpson quadrature.
#[derive(Debug, Clone)]
pub(crate) struct SimpsonGrid {
    period: f64,
    samples: usize,
}

impl SimpsonGrid {
    pub(crate) fn new(omega: f64, samples: usize) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "frequency must be positive and finite, got {omega}"
            )));
        }
        if samples < 2 || !samples.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "Simpson quadrature needs an even number of intervals, got {samples}"
            )));
        }
        Ok(SimpsonGrid {
            period: 2.0 * PI / omega,
            samples,
        })
    }

    pub(crate) fn times(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.period / self.samples as f64;
        (0..=self.samples).map(move |i| i as f64 * h)
    }

    pub(crate) fn sample(&self, g: impl Fn(f64) -> f64) -> Vec<f64> {
        self.times().map(g).collect()
    }

    fn weight(&self, i: usize) -> f64 {
        let h = self.period / self.samples as f64;
        let w = if i == 0 || i == self.samples {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        w * h / 3.0
    }

    /// `int_0^T a(t) b(t) dt` from samples.
    pub(crate) fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        (0..=self.samples)
            .map(|i| self.weight(i) * a[i] * b[i])
            .sum()
    }

    fn coefficients(&self, values: &[f64], k_max: usize) -> TimeCoefficients {
        let n = self.samples;
        let weights: Vec<f64> = (0..=n).map(|i| self.weight(i)).collect();
        // cos(2 pi k i / n) depends only on (k i) mod n
        let table: Vec<(f64, f64)> = (0..n)
            .map(|j| (2.0 * PI * j as f64 / n as f64).sin_cos())
            .collect();
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let flush = |a: f64| {
            if a.abs() <= 64.0 * f64::EPSILON * scale {
                0.0
            } else {
                a
            }
        };

        let a0 = flush(dot(&weights, values) / self.period);
        let mut cos = Vec::with_capacity(k_max);
        let mut sin = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            let (mut c, mut s) = (0.0, 0.0);
            for i in 0..=n {
                let (sn, cs) = table[(k * i) % n];
                let wv = weights[i] * values[i];
                c += wv * cs;
                s += wv * sn;
            }
            cos.push(flush(2.0 * c / self.period));
            sin.push(flush(2.0 * s / self.period));
        }
        TimeCoefficients { a0, cos, sin }
    }
}

/// Fourier coefficients of `g` up to `k_max` by composite Simpson quadrature
/// with `samples` intervals per period.
///
/// Coefficients below the round-off level of the samples are set to zero.
pub fn time_fourier_coefficients(
    g: &dyn Fn(f64) -> f64,
    omega: f64,
    k_max: usize,
    samples: usize,
) -> Result<TimeCoefficients> {
    let grid = SimpsonGrid::new(omega, samples)?;
    if samples < 4 * k_max.max(1) {
        return Err(Error::InvalidArgument(format!(
            "{samples} samples cannot resolve harmonics up to {k_max}; need at least {}",
            4 * k_max.max(1)
        )));
    }
    Ok(grid.coefficients(&grid.sample(g), k_max))
}

/// The cosine and sine coefficient vectors of one harmonic.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPair {
    pub c: Vec<f64>,
    pub s: Vec<f64>,
}

impl CoefficientPair {
    pub fn new(c: Vec<f64>, s: Vec<f64>) -> Result<Self> {
        if c.len() != s.len() {
            return Err(Error::DimensionMismatch {
                expected: c.len(),
                got: s.len(),
            });
        }
        Ok(CoefficientPair { c, s })
    }

    pub fn zeros(n: usize) -> Self {
        CoefficientPair {
            c: vec![0.0; n],
            s: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// Quarter-period shift `(c, s) -> (-s, c)`.
    pub fn perp(&self) -> CoefficientPair {
        CoefficientPair {
            c: self.s.iter().map(|v| -v).collect(),
            s: self.c.clone(),
        }
    }

    pub fn scaled(&self, a: f64) -> CoefficientPair {
        CoefficientPair {
            c: self.c.iter().map(|v| a * v).collect(),
            s: self.s.iter().map(|v| a * v).collect(),
        }
    }

    /// Euclidean inner product of the stacked vectors.
    pub fn dot(&self, other: &CoefficientPair) -> f64 {
        dot(&self.c, &other.c) + dot(&self.s, &other.s)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// `<M u, v>` summed over both parts.
    pub fn weighted_dot(&self, m: &CsrMatrix, other: &CoefficientPair) -> f64 {
        dot(&m.mul_vec(&self.c), &other.c) + dot(&m.mul_vec(&self.s), &other.s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pure_harmonics() {
        let c = time_fourier_coefficients(&|t: f64| t.cos(), 1.0, 3, 1 << 10).unwrap();
        assert!(c.a0.abs() < 1e-14);
        assert!((c.cos[0] - 1.0).abs() < 1e-13);
        assert!(c.cos[1..].iter().chain(&c.sin).all(|v| v.abs() < 1e-13));
        let one = time_fourier_coefficients(&|_| 1.0, 2.0, 4, 64).unwrap();
        assert!((one.a0 - 1.0).abs() < 1e-14);
        assert!(one.cos.iter().chain(&one.sin).all(|&v| v == 0.0));
    }

    #[test]
    fn shifted_harmonic_with_other_frequency() {
        let omega = 0.5;
        let g = |t: f64| 3.0 * (2.0 * omega * t).sin() - 0.25 * (omega * t).cos() + 2.0;
        let c = time_fourier_coefficients(&g, omega, 4, 256).unwrap();
        assert!((c.a0 - 2.0).abs() < 1e-13);
        assert!((c.cos_coef(1) + 0.25).abs() < 1e-13);
        assert!((c.sin_coef(2) - 3.0).abs() < 1e-13);
        assert_eq!(c.cos_coef(9), 0.0);
        assert!((c.eval_truncated(0.7, omega, 4) - g(0.7)).abs() < 1e-12);
    }

    #[test]
    fn rejects_too_few_samples() {
        assert!(time_fourier_coefficients(&|t: f64| t.sin(), 1.0, 8, 16).is_err());
        assert!(time_fourier_coefficients(&|t: f64| t.sin(), 1.0, 2, 15).is_err());
        assert!(time_fourier_coefficients(&|t: f64| t.sin(), 0.0, 2, 64).is_err());
    }

    #[test]
    fn smooth_factor_matches_trapezoid_oracle() {
        // e^t sin^2 t ((1 + 2 pi^2) sin t + 3 cos t) against a fine trapezoid rule;
        // the integrand and its first derivative are periodic, so trapezoid is accurate
        let a = 1.0 + 2.0 * PI * PI;
        let g = move |t: f64| t.exp() * t.sin().powi(2) * (a * t.sin() + 3.0 * t.cos());
        let simpson = time_fourier_coefficients(&g, 1.0, 8, 1 << 14).unwrap();
        let m = 1_000_000usize;
        let h = 2.0 * PI / m as f64;
        let mut a0 = 0.0;
        let mut ac = [0.0; 8];
        let mut as_ = [0.0; 8];
        for i in 0..m {
            let t = i as f64 * h;
            let v = g(t);
            a0 += v;
            for k in 1..=8 {
                let (s, c) = (k as f64 * t).sin_cos();
                ac[k - 1] += v * c;
                as_[k - 1] += v * s;
            }
        }
        let period = 2.0 * PI;
        assert!((simpson.a0 - a0 * h / period).abs() < 1e-8);
        for k in 0..8 {
            assert!((simpson.cos[k] - 2.0 * ac[k] * h / period).abs() < 1e-8);
            assert!((simpson.sin[k] - 2.0 * as_[k] * h / period).abs() < 1e-8);
        }
    }

    #[test]
    fn parseval_deficit_is_nonnegative_and_decreasing() {
        let g = |t: f64| t.exp() * t.sin().powi(3);
        let grid = SimpsonGrid::new(1.0, 1 << 14).unwrap();
        let v = grid.sample(g);
        let energy = grid.inner(&v, &v);
        let c = time_fourier_coefficients(&g, 1.0, 32, 1 << 14).unwrap();
        let mut last = f64::INFINITY;
        for n in 0..=32 {
            let deficit = energy - c.parseval_energy(2.0 * PI, n);
            assert!(deficit >= -1e-9 * energy);
            assert!(deficit <= last + 1e-9 * energy);
            last = deficit;
        }
    }

    fn pair(len: usize) -> impl Strategy<Value = CoefficientPair> {
        (
            prop::collection::vec(-10.0f64..10.0, len),
            prop::collection::vec(-10.0f64..10.0, len),
        )
            .prop_map(|(c, s)| CoefficientPair { c, s })
    }

    proptest! {
        #[test]
        fn perp_is_a_quarter_turn(p in pair(7)) {
            let pp = p.perp().perp();
            prop_assert_eq!(pp, p.scaled(-1.0));
            prop_assert_eq!(p.perp().norm(), p.norm());
            prop_assert_eq!(p.perp().dot(&p), 0.0);
        }

        #[test]
        fn mass_orthogonality(u in pair(9), v in pair(9), kw in 0.1f64..10.0) {
            use crate::assembly::{assemble_mass, CoefficientField, DirichletMap};
            use crate::mesh::Mesh;
            let mesh = Mesh::uniform(4).unwrap();
            let sigma = CoefficientField::constant(1.3).unwrap();
            let m = assemble_mass(&mesh, &sigma, &DirichletMap::new(&mesh)).unwrap();
            let scale = u.norm() * v.norm() * kw + 1.0;
            prop_assert!((u.perp().weighted_dot(&m, &u)).abs() <= 1e-12 * scale);
            let lhs = kw * u.weighted_dot(&m, &v);
            let rhs = kw * u.perp().weighted_dot(&m, &v.perp());
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }
    }
}
