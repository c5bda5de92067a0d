use std::f64::consts::PI;

use crate::assembly::{integrate_elementwise, CoefficientField, QuadratureRule};
use crate::error::{Error, Result};
use crate::fourier::functions::{SpatialFn, TimeFn};
use crate::fourier::{SimpsonGrid, TimeCoefficients};
use crate::mesh::{Mesh, Point};

/// Time quadrature parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourierSettings {
    /// Simpson intervals per period.
    pub samples: usize,
    /// Highest harmonic used for tails of the exact solution.
    pub k_max: usize,
}

impl Default for FourierSettings {
    fn default() -> Self {
        FourierSettings {
            samples: 1 << 14,
            k_max: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparableTerm {
    pub space: SpatialFn,
    pub time: TimeFn,
}

/// `f(x, t) = sum_j s_j(x) g_j(t)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeparableSource {
    pub terms: Vec<SeparableTerm>,
}

/// Spatial cosine and sine coefficient functions of one harmonic.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialPair {
    pub c: SpatialFn,
    pub s: SpatialFn,
}

impl SpatialPair {
    pub fn zero() -> Self {
        SpatialPair {
            c: SpatialFn::zero(),
            s: SpatialFn::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && self.s.is_zero()
    }
}

/// Squared space-time norms of the harmonics above the truncation index.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExactTail {
    /// `(T/2) sum ||u_k||^2`
    pub l2: f64,
    /// `(T/2) sum ||grad u_k||^2`
    pub grad: f64,
    /// `(T/2) sum k omega ||u_k||^2`
    pub half: f64,
}

/// `L2` and gradient Gram matrices of a list of spatial factors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGram {
    pub l2: Vec<Vec<f64>>,
    pub grad: Vec<Vec<f64>>,
}

impl SpatialGram {
    fn quadratic(m: &[Vec<f64>], a: &[f64], b: &[f64]) -> f64 {
        let mut sum = 0.0;
        for (i, row) in m.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                sum += a[i] * g * b[j];
            }
        }
        sum
    }
}

/// Gram matrices on a fixed fine reference triangulation with a degree-10 rule.
pub fn spatial_gram(fns: &[&SpatialFn]) -> SpatialGram {
    let mesh = Mesh::uniform(32).expect("reference mesh");
    let rule = QuadratureRule::collapsed_gauss(10);
    let n = fns.len();
    let mut l2 = vec![vec![0.0; n]; n];
    let mut grad = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = integrate_elementwise(&mesh, &rule, |_, _, x| fns[i].eval(x) * fns[j].eval(x));
            let g = integrate_elementwise(&mesh, &rule, |_, _, x| {
                let (a, b) = (fns[i].grad(x), fns[j].grad(x));
                a[0] * b[0] + a[1] * b[1]
            });
            l2[i][j] = v;
            l2[j][i] = v;
            grad[i][j] = g;
            grad[j][i] = g;
        }
    }
    SpatialGram { l2, grad }
}

impl SeparableSource {
    pub fn new(terms: Vec<SeparableTerm>) -> Self {
        SeparableSource { terms }
    }

    pub fn single(space: SpatialFn, time: TimeFn) -> Self {
        SeparableSource {
            terms: vec![SeparableTerm { space, time }],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.iter().all(|t| t.space.is_zero())
    }

    pub fn eval(&self, x: Point, t: f64, omega: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| term.space.eval(x) * term.time.eval(t, omega))
            .sum()
    }

    /// Source `sigma du/dt - nu lap u` of a separable solution `u`, for constant coefficients.
    pub fn derive_from_solution(
        exact: &SeparableSource,
        sigma: f64,
        nu: f64,
        omega: f64,
    ) -> Result<SeparableSource> {
        let mut terms = Vec::new();
        for term in &exact.terms {
            let derivative = term.time.derivative(omega).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "time factor `{}` has no derivative in the registry",
                    term.time
                ))
            })?;
            for (c, g) in derivative {
                terms.push(SeparableTerm {
                    space: term.space.scale(sigma * c),
                    time: g,
                });
            }
        }
        for term in &exact.terms {
            terms.push(SeparableTerm {
                space: term.space.neg_laplacian().scale(nu),
                time: term.time,
            });
        }
        terms.retain(|t| !t.space.is_zero());
        Ok(SeparableSource { terms })
    }

    pub fn time_coefficients(
        &self,
        omega: f64,
        k_max: usize,
        samples: usize,
    ) -> Result<Vec<TimeCoefficients>> {
        self.terms
            .iter()
            .map(|term| {
                crate::fourier::time_fourier_coefficients(
                    &|t| term.time.eval(t, omega),
                    omega,
                    k_max,
                    samples,
                )
            })
            .collect()
    }

    /// Spatial coefficient functions of harmonics `0..=n`.
    pub fn modes(&self, omega: f64, n: usize, samples: usize) -> Result<Vec<SpatialPair>> {
        let coeffs = self.time_coefficients(omega, n, samples)?;
        Ok((0..=n)
            .map(|k| SpatialPair {
                c: SpatialFn::combination(
                    coeffs
                        .iter()
                        .zip(&self.terms)
                        .map(|(a, term)| (a.cos_coef(k), &term.space)),
                ),
                s: SpatialFn::combination(
                    coeffs
                        .iter()
                        .zip(&self.terms)
                        .map(|(a, term)| (a.sin_coef(k), &term.space)),
                ),
            })
            .collect())
    }

    /// Truncation remainder `E_N = ||f - f_N||^2` over the space-time cylinder.
    ///
    /// Each time factor minus its partial sum is sampled directly, so no tail
    /// series has to be summed.
    pub fn remainder_en(&self, n: usize, omega: f64, samples: usize) -> Result<f64> {
        if self.is_empty() {
            return Ok(0.0);
        }
        let grid = SimpsonGrid::new(omega, samples)?;
        let coeffs = self.time_coefficients(omega, n, samples)?;
        let residuals: Vec<Vec<f64>> = self
            .terms
            .iter()
            .zip(&coeffs)
            .map(|(term, a)| {
                grid.sample(|t| term.time.eval(t, omega) - a.eval_truncated(t, omega, n))
            })
            .collect();
        let spaces: Vec<&SpatialFn> = self.terms.iter().map(|t| &t.space).collect();
        let gram = spatial_gram(&spaces);
        let m = self.terms.len();
        let mut total = 0.0;
        for i in 0..m {
            for j in 0..m {
                total += gram.l2[i][j] * grid.inner(&residuals[i], &residuals[j]);
            }
        }
        Ok(total.max(0.0))
    }

    /// Norms of harmonics `n < k <= settings.k_max`.
    pub fn tail(&self, n: usize, omega: f64, settings: &FourierSettings) -> Result<ExactTail> {
        if self.is_empty() || settings.k_max <= n {
            return Ok(ExactTail::default());
        }
        let coeffs = self.time_coefficients(omega, settings.k_max, settings.samples)?;
        let spaces: Vec<&SpatialFn> = self.terms.iter().map(|t| &t.space).collect();
        let gram = spatial_gram(&spaces);
        let half_period = PI / omega;
        let mut tail = ExactTail::default();
        for k in n + 1..=settings.k_max {
            let ac: Vec<f64> = coeffs.iter().map(|a| a.cos_coef(k)).collect();
            let as_: Vec<f64> = coeffs.iter().map(|a| a.sin_coef(k)).collect();
            let l2 = SpatialGram::quadratic(&gram.l2, &ac, &ac)
                + SpatialGram::quadratic(&gram.l2, &as_, &as_);
            let grad = SpatialGram::quadratic(&gram.grad, &ac, &ac)
                + SpatialGram::quadratic(&gram.grad, &as_, &as_);
            tail.l2 += half_period * l2;
            tail.grad += half_period * grad;
            tail.half += half_period * k as f64 * omega * l2;
        }
        Ok(tail)
    }

    fn check_periodic(&self, omega: f64, what: &str) -> Result<()> {
        let period = 2.0 * PI / omega;
        for (j, term) in self.terms.iter().enumerate() {
            let (a, b) = (term.time.eval(0.0, omega), term.time.eval(period, omega));
            let scale = (0..=64)
                .map(|i| term.time.eval(i as f64 * period / 64.0, omega).abs())
                .fold(1.0, f64::max);
            if (a - b).abs() > 1e-9 * scale {
                return Err(Error::config(
                    format!("{what}.{j}.time"),
                    format!("`{}` is not periodic with period {period}", term.time),
                ));
            }
        }
        Ok(())
    }
}

/// A time-periodic problem `sigma du/dt - div(nu grad u) = f` on the unit square
/// with `u = 0` on the boundary.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub name: String,
    pub omega: f64,
    /// Highest harmonic `N` of the approximation.
    pub truncation: usize,
    pub sigma: CoefficientField,
    pub nu: CoefficientField,
    pub source: SeparableSource,
    pub exact: Option<SeparableSource>,
}

impl ProblemSpec {
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Time-harmonic data: `u = x(x-1)y(y-1) cos t`, `omega = sigma = nu = 1`, `N = 1`.
    pub fn example1() -> Self {
        let exact = SeparableSource::single(SpatialFn::bubble(), TimeFn::Cos(1));
        let source = SeparableSource::derive_from_solution(&exact, 1.0, 1.0, 1.0)
            .expect("registry derivative");
        ProblemSpec {
            name: "example1".into(),
            omega: 1.0,
            truncation: 1,
            sigma: CoefficientField::Constant(1.0),
            nu: CoefficientField::Constant(1.0),
            source,
            exact: Some(exact),
        }
    }

    /// Time-analytic data: `u = sin(pi x) sin(pi y) e^t sin^3 t`, `omega = sigma = nu = 1`, `N = 8`.
    pub fn example2() -> Self {
        let space = SpatialFn::sinsin(1, 1);
        ProblemSpec {
            name: "example2".into(),
            omega: 1.0,
            truncation: 8,
            sigma: CoefficientField::Constant(1.0),
            nu: CoefficientField::Constant(1.0),
            source: SeparableSource::single(
                space.clone(),
                TimeFn::ExpSin2 {
                    a: 1.0 + 2.0 * PI * PI,
                    b: 3.0,
                },
            ),
            exact: Some(SeparableSource::single(space, TimeFn::ExpSin3)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::config("omega", "must be positive and finite"));
        }
        self.source.check_periodic(self.omega, "source")?;
        if let Some(exact) = &self.exact {
            exact.check_periodic(self.omega, "exact")?;
            for (j, term) in exact.terms.iter().enumerate() {
                let scale = 1.0 + term.space.eval([0.5, 0.5]).abs();
                if term.space.max_on_boundary(64) > 1e-12 * scale {
                    return Err(Error::config(
                        format!("exact.{j}.space"),
                        "exact solution must vanish on the boundary",
                    ));
                }
            }
        }
        Ok(())
    }
}
