//! Quadrature rules on triangles, in barycentric coordinates.
//!
//! Weights are normalized to sum to one, so an integral over a triangle `T`
//! is `|T| * sum_q w_q f(x_q)`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
    degree: usize,
}

impl QuadratureRule {
    pub fn new(points: Vec<[f64; 3]>, weights: Vec<f64>, degree: usize) -> Result<Self> {
        if points.len() != weights.len() || points.is_empty() {
            return Err(Error::InvalidArgument(
                "quadrature needs one weight per point".into(),
            ));
        }
        Ok(QuadratureRule {
            points,
            weights,
            degree,
        })
    }

    /// One-point centroid rule, exact for linear polynomials.
    pub fn centroid() -> Self {
        QuadratureRule {
            points: vec![[1.0 / 3.0; 3]],
            weights: vec![1.0],
            degree: 1,
        }
    }

    /// Edge-midpoint rule, exact for quadratics.
    pub fn midpoints() -> Self {
        QuadratureRule {
            points: vec![[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]],
            weights: vec![1.0 / 3.0; 3],
            degree: 2,
        }
    }

    /// Symmetric 7-point rule of degree 5 (Radon / Dunavant).
    pub fn degree5() -> Self {
        let s15 = 15f64.sqrt();
        let b1 = (6.0 - s15) / 21.0;
        let a1 = 1.0 - 2.0 * b1;
        let w1 = (155.0 - s15) / 1200.0;
        let b2 = (6.0 + s15) / 21.0;
        let a2 = 1.0 - 2.0 * b2;
        let w2 = (155.0 + s15) / 1200.0;
        QuadratureRule {
            points: vec![
                [1.0 / 3.0; 3],
                [a1, b1, b1],
                [b1, a1, b1],
                [b1, b1, a1],
                [a2, b2, b2],
                [b2, a2, b2],
                [b2, b2, a2],
            ],
            weights: vec![9.0 / 40.0, w1, w1, w1, w2, w2, w2],
            degree: 5,
        }
    }

    /// Collapsed (Duffy) tensor Gauss-Legendre rule exact for the given degree.
    pub fn collapsed_gauss(degree: usize) -> Self {
        // the Duffy Jacobian adds one to the polynomial degree in the collapsed direction
        let m = (degree + 3) / 2;
        let (xs, ws) = gauss_legendre_unit(m);
        let mut points = Vec::with_capacity(m * m);
        let mut weights = Vec::with_capacity(m * m);
        for (&xi, &wi) in xs.iter().zip(&ws) {
            for (&eta, &we) in xs.iter().zip(&ws) {
                let x = xi;
                let y = eta * (1.0 - xi);
                points.push([1.0 - x - y, x, y]);
                weights.push(2.0 * wi * we * (1.0 - xi));
            }
        }
        QuadratureRule {
            points,
            weights,
            degree,
        }
    }

    /// The cheapest built-in rule exact for at least `degree`.
    pub fn for_degree(degree: usize) -> Self {
        match degree {
            0 | 1 => Self::centroid(),
            2 => Self::midpoints(),
            3..=5 => Self::degree5(),
            d => Self::collapsed_gauss(d),
        }
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ([f64; 3], f64)> + '_ {
        self.points
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }
}

/// Gauss-Legendre nodes and weights on [0, 1].
pub fn gauss_legendre_unit(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; m];
    let mut ws = vec![0.0; m];
    for i in 0..m {
        // Chebyshev-like initial guess, then Newton on P_m
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(m, x);
        if d != 0.0 {
            dp = d;
        }
        xs[i] = 0.5 * (1.0 - x);
        ws[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}

fn legendre(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// Integral of x^a y^b over the reference triangle (0,0),(1,0),(0,1).
    fn monomial_integral(a: u32, b: u32) -> f64 {
        factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    fn check_exactness(rule: &QuadratureRule) {
        let total: f64 = rule.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
        let d = rule.degree() as u32;
        for a in 0..=d {
            for b in 0..=(d - a) {
                let approx: f64 = rule
                    .iter()
                    .map(|(p, w)| 0.5 * w * p[1].powi(a as i32) * p[2].powi(b as i32))
                    .sum();
                let exact = monomial_integral(a, b);
                assert!(
                    (approx - exact).abs() < 1e-14 * exact.max(1.0),
                    "degree {} rule fails on x^{a} y^{b}: {approx} vs {exact}",
                    d
                );
            }
        }
    }

    #[test]
    fn builtin_rules_are_exact() {
        check_exactness(&QuadratureRule::centroid());
        check_exactness(&QuadratureRule::midpoints());
        check_exactness(&QuadratureRule::degree5());
        for d in [1, 4, 7, 10, 15] {
            check_exactness(&QuadratureRule::collapsed_gauss(d));
        }
    }

    #[test]
    fn degree5_is_not_degree6() {
        let rule = QuadratureRule::degree5();
        let worst = (0..=6u32)
            .map(|a| {
                let b = 6 - a;
                let approx: f64 = rule
                    .iter()
                    .map(|(p, w)| 0.5 * w * p[1].powi(a as i32) * p[2].powi(b as i32))
                    .sum();
                (approx - monomial_integral(a, b)).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst > 1e-8);
    }

    #[test]
    fn gauss_legendre_weights() {
        let (xs, ws) = gauss_legendre_unit(5);
        assert!((ws.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        // exact for x^9 on [0,1]
        let v: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(9)).sum();
        assert!((v - 0.1).abs() < 1e-15);
    }

    #[test]
    fn mismatched_rule_is_rejected() {
        assert!(QuadratureRule::new(vec![[1.0, 0.0, 0.0]], vec![], 0).is_err());
    }
}
