//! Closed-form spatial and temporal factors of separable data.
//!
//! Spatial factors are sums of bivariate polynomials and products
//! `sin(m pi x) sin(n pi y)`, a family closed under linear combinations and
//! the Laplacian. Time factors come from a small fixed registry.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mesh::Point;

/// Sparse bivariate polynomial `sum c x^a y^b`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly2 {
    /// `(a, b, c)`, sorted by `(a, b)`, no zero coefficients.
    terms: Vec<(u32, u32, f64)>,
}

impl Poly2 {
    pub fn new(terms: impl IntoIterator<Item = (u32, u32, f64)>) -> Self {
        let mut terms: Vec<_> = terms.into_iter().collect();
        terms.sort_by_key(|&(a, b, _)| (a, b));
        let mut merged: Vec<(u32, u32, f64)> = Vec::with_capacity(terms.len());
        for (a, b, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == a && last.1 == b => last.2 += c,
                _ => merged.push((a, b, c)),
            }
        }
        merged.retain(|t| t.2 != 0.0);
        Poly2 { terms: merged }
    }

    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn monomial(a: u32, b: u32, c: f64) -> Self {
        Poly2::new([(a, b, c)])
    }

    pub fn terms(&self) -> &[(u32, u32, f64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        Poly2::new(self.terms.iter().chain(&other.terms).copied())
    }

    pub fn scale(&self, s: f64) -> Poly2 {
        Poly2::new(self.terms.iter().map(|&(a, b, c)| (a, b, s * c)))
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        Poly2::new(self.terms.iter().flat_map(|&(a, b, c)| {
            other
                .terms
                .iter()
                .map(move |&(p, q, d)| (a + p, b + q, c * d))
        }))
    }

    pub fn eval(&self, x: Point) -> f64 {
        self.terms
            .iter()
            .map(|&(a, b, c)| c * x[0].powi(a as i32) * x[1].powi(b as i32))
            .sum()
    }

    pub fn grad(&self, x: Point) -> [f64; 2] {
        let mut g = [0.0; 2];
        for &(a, b, c) in &self.terms {
            if a > 0 {
                g[0] += c * a as f64 * x[0].powi(a as i32 - 1) * x[1].powi(b as i32);
            }
            if b > 0 {
                g[1] += c * b as f64 * x[0].powi(a as i32) * x[1].powi(b as i32 - 1);
            }
        }
        g
    }

    pub fn neg_laplacian(&self) -> Poly2 {
        Poly2::new(self.terms.iter().flat_map(|&(a, b, c)| {
            let mut out = Vec::with_capacity(2);
            if a >= 2 {
                out.push((a - 2, b, -c * (a * (a - 1)) as f64));
            }
            if b >= 2 {
                out.push((a, b - 2, -c * (b * (b - 1)) as f64));
            }
            out
        }))
    }
}

/// `p(x, y) + sum c sin(m pi x) sin(n pi y)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpatialFn {
    poly: Poly2,
    /// `(m, n, c)`, sorted by `(m, n)`, no zero coefficients.
    trig: Vec<(u32, u32, f64)>,
}

impl SpatialFn {
    pub fn zero() -> Self {
        SpatialFn::default()
    }

    pub fn one() -> Self {
        Self::from_poly(Poly2::monomial(0, 0, 1.0))
    }

    pub fn from_poly(poly: Poly2) -> Self {
        SpatialFn {
            poly,
            trig: Vec::new(),
        }
    }

    /// `x (1 - x) y (1 - y)`
    pub fn bubble() -> Self {
        let px = Poly2::new([(1, 0, 1.0), (2, 0, -1.0)]);
        let py = Poly2::new([(0, 1, 1.0), (0, 2, -1.0)]);
        Self::from_poly(px.mul(&py))
    }

    /// `x^a y^b`
    pub fn monomial(a: u32, b: u32) -> Self {
        Self::from_poly(Poly2::monomial(a, b, 1.0))
    }

    /// `sin(m pi x) sin(n pi y)`
    pub fn sinsin(m: u32, n: u32) -> Self {
        Self::with_trig(Poly2::zero(), [(m, n, 1.0)])
    }

    fn with_trig(poly: Poly2, trig: impl IntoIterator<Item = (u32, u32, f64)>) -> Self {
        let mut trig: Vec<_> = trig
            .into_iter()
            .filter(|&(m, n, _)| m > 0 && n > 0)
            .collect();
        trig.sort_by_key(|&(m, n, _)| (m, n));
        let mut merged: Vec<(u32, u32, f64)> = Vec::with_capacity(trig.len());
        for (m, n, c) in trig {
            match merged.last_mut() {
                Some(last) if last.0 == m && last.1 == n => last.2 += c,
                _ => merged.push((m, n, c)),
            }
        }
        merged.retain(|t| t.2 != 0.0);
        SpatialFn { poly, trig: merged }
    }

    pub fn poly(&self) -> &Poly2 {
        &self.poly
    }

    pub fn trig_terms(&self) -> &[(u32, u32, f64)] {
        &self.trig
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.trig.is_empty()
    }

    pub fn add(&self, other: &SpatialFn) -> SpatialFn {
        Self::with_trig(
            self.poly.add(&other.poly),
            self.trig.iter().chain(&other.trig).copied(),
        )
    }

    pub fn scale(&self, s: f64) -> SpatialFn {
        Self::with_trig(
            self.poly.scale(s),
            self.trig.iter().map(|&(m, n, c)| (m, n, s * c)),
        )
    }

    /// `sum_i w_i f_i`
    pub fn combination<'a>(parts: impl IntoIterator<Item = (f64, &'a SpatialFn)>) -> SpatialFn {
        parts
            .into_iter()
            .fold(SpatialFn::zero(), |acc, (w, f)| acc.add(&f.scale(w)))
    }

    pub fn eval(&self, x: Point) -> f64 {
        let mut v = self.poly.eval(x);
        for &(m, n, c) in &self.trig {
            v += c * (m as f64 * PI * x[0]).sin() * (n as f64 * PI * x[1]).sin();
        }
        v
    }

    pub fn grad(&self, x: Point) -> [f64; 2] {
        let mut g = self.poly.grad(x);
        for &(m, n, c) in &self.trig {
            let (mp, np) = (m as f64 * PI, n as f64 * PI);
            let (sx, cx) = (mp * x[0]).sin_cos();
            let (sy, cy) = (np * x[1]).sin_cos();
            g[0] += c * mp * cx * sy;
            g[1] += c * np * sx * cy;
        }
        g
    }

    pub fn neg_laplacian(&self) -> SpatialFn {
        let pi2 = PI * PI;
        Self::with_trig(
            self.poly.neg_laplacian(),
            self.trig
                .iter()
                .map(|&(m, n, c)| (m, n, c * pi2 * (m * m + n * n) as f64)),
        )
    }

    /// Largest `|f|` over a uniform sample of the boundary of the unit square.
    pub fn max_on_boundary(&self, samples: usize) -> f64 {
        let samples = samples.max(1);
        (0..=samples)
            .flat_map(|i| {
                let s = i as f64 / samples as f64;
                [[s, 0.0], [s, 1.0], [0.0, s], [1.0, s]]
            })
            .map(|x| self.eval(x).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for SpatialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for &(a, b, c) in self.poly.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*x^{a}*y^{b}")?;
        }
        for &(m, n, c) in &self.trig {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*sin({m}pi x)*sin({n}pi y)")?;
        }
        Ok(())
    }
}

impl FromStr for SpatialFn {
    type Err = Error;

    /// Accepts `one`, `bubble`, `monomial(a,b)`, `sinsin(m,n)` and
    /// `neg_laplacian(<any of these>)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: &str| Error::InvalidArgument(format!("spatial factor `{s}`: {msg}"));
        if let Some(inner) = strip_call(s, "neg_laplacian") {
            return Ok(inner.parse::<SpatialFn>()?.neg_laplacian());
        }
        match s {
            "one" => return Ok(SpatialFn::one()),
            "bubble" => return Ok(SpatialFn::bubble()),
            "zero" => return Ok(SpatialFn::zero()),
            _ => {}
        }
        if let Some(args) = strip_call(s, "monomial") {
            let [a, b] = parse_uints(args).ok_or_else(|| bad("expected two exponents"))?;
            return Ok(SpatialFn::monomial(a, b));
        }
        if let Some(args) = strip_call(s, "sinsin") {
            let [m, n] = parse_uints(args).ok_or_else(|| bad("expected two frequencies"))?;
            if m == 0 || n == 0 {
                return Err(bad("frequencies must be positive"));
            }
            return Ok(SpatialFn::sinsin(m, n));
        }
        Err(bad("unknown factor"))
    }
}

/// Time factors. Harmonics are in `omega t`; the exponential ones are in plain `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeFn {
    One,
    /// `cos(k omega t)`
    Cos(u32),
    /// `sin(k omega t)`
    Sin(u32),
    /// `e^t sin^3 t`
    ExpSin3,
    /// `e^t sin^2 t (a sin t + b cos t)`
    ExpSin2 {
        a: f64,
        b: f64,
    },
}

impl TimeFn {
    pub fn eval(&self, t: f64, omega: f64) -> f64 {
        match *self {
            TimeFn::One => 1.0,
            TimeFn::Cos(k) => (k as f64 * omega * t).cos(),
            TimeFn::Sin(k) => (k as f64 * omega * t).sin(),
            TimeFn::ExpSin3 => t.exp() * t.sin().powi(3),
            TimeFn::ExpSin2 { a, b } => {
                let (s, c) = t.sin_cos();
                t.exp() * s * s * (a * s + b * c)
            }
        }
    }

    /// Time derivative as a combination of registry entries, if it has one.
    pub fn derivative(&self, omega: f64) -> Option<Vec<(f64, TimeFn)>> {
        match *self {
            TimeFn::One => Some(Vec::new()),
            TimeFn::Cos(k) => Some(vec![(-(k as f64) * omega, TimeFn::Sin(k))]),
            TimeFn::Sin(k) => Some(vec![(k as f64 * omega, TimeFn::Cos(k))]),
            TimeFn::ExpSin3 => Some(vec![(1.0, TimeFn::ExpSin2 { a: 1.0, b: 3.0 })]),
            TimeFn::ExpSin2 { .. } => None,
        }
    }
}

impl fmt::Display for TimeFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeFn::One => write!(f, "one"),
            TimeFn::Cos(k) => write!(f, "cos({k})"),
            TimeFn::Sin(k) => write!(f, "sin({k})"),
            TimeFn::ExpSin3 => write!(f, "exp_sin3"),
            TimeFn::ExpSin2 { a, b } => write!(f, "exp_sin2({a},{b})"),
        }
    }
}

impl FromStr for TimeFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: &str| Error::InvalidArgument(format!("time factor `{s}`: {msg}"));
        match s {
            "one" => return Ok(TimeFn::One),
            "exp_sin3" => return Ok(TimeFn::ExpSin3),
            _ => {}
        }
        if let Some(args) = strip_call(s, "cos") {
            let [k] = parse_uints(args).ok_or_else(|| bad("expected a harmonic index"))?;
            return Ok(TimeFn::Cos(k));
        }
        if let Some(args) = strip_call(s, "sin") {
            let [k] = parse_uints(args).ok_or_else(|| bad("expected a harmonic index"))?;
            return Ok(TimeFn::Sin(k));
        }
        if let Some(args) = strip_call(s, "exp_sin2") {
            let parts: Vec<_> = args.split(',').map(|p| p.trim().parse::<f64>()).collect();
            return match parts.as_slice() {
                [Ok(a), Ok(b)] => Ok(TimeFn::ExpSin2 { a: *a, b: *b }),
                _ => Err(bad("expected two real coefficients")),
            };
        }
        Err(bad("unknown factor"))
    }
}

fn strip_call<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    s.strip_prefix(name)?
        .trim_start()
        .strip_prefix('(')?
        .strip_suffix(')')
}

fn parse_uints<const N: usize>(args: &str) -> Option<[u32; N]> {
    let parsed: Vec<u32> = args
        .split(',')
        .map(|p| p.trim().parse().ok())
        .collect::<Option<_>>()?;
    parsed.try_into().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_grad(f: &SpatialFn, x: Point) -> [f64; 2] {
        let h = 1e-6;
        [
            (f.eval([x[0] + h, x[1]]) - f.eval([x[0] - h, x[1]])) / (2.0 * h),
            (f.eval([x[0], x[1] + h]) - f.eval([x[0], x[1] - h])) / (2.0 * h),
        ]
    }

    fn fd_neg_laplacian(f: &SpatialFn, x: Point) -> f64 {
        let h = 1e-4;
        let c = f.eval(x);
        -(f.eval([x[0] + h, x[1]])
            + f.eval([x[0] - h, x[1]])
            + f.eval([x[0], x[1] + h])
            + f.eval([x[0], x[1] - h])
            - 4.0 * c)
            / (h * h)
    }

    #[test]
    fn bubble_closed_forms() {
        let b = SpatialFn::bubble();
        let x = [0.3, 0.7];
        assert!((b.eval(x) - 0.3 * 0.7 * 0.7 * 0.3).abs() < 1e-15);
        let lap = b.neg_laplacian();
        let expected = 2.0 * (0.3 * 0.7 + 0.7 * 0.3);
        assert!((lap.eval(x) - expected).abs() < 1e-14);
        assert!(b.max_on_boundary(50) < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let f = SpatialFn::bubble()
            .add(&SpatialFn::sinsin(2, 1).scale(0.5))
            .add(&SpatialFn::monomial(3, 1).scale(-1.5));
        for x in [[0.2, 0.4], [0.9, 0.1], [0.55, 0.55]] {
            let (g, gf) = (f.grad(x), fd_grad(&f, x));
            assert!((g[0] - gf[0]).abs() < 1e-7 && (g[1] - gf[1]).abs() < 1e-7);
            assert!((f.neg_laplacian().eval(x) - fd_neg_laplacian(&f, x)).abs() < 1e-5);
        }
    }

    #[test]
    fn combination_cancels() {
        let f = SpatialFn::sinsin(1, 1).add(&SpatialFn::bubble());
        assert!(f.add(&f.scale(-1.0)).is_zero());
        let g = SpatialFn::combination([(2.0, &f), (-1.0, &f)]);
        assert_eq!(g, f);
    }

    #[test]
    fn parse_registry() {
        assert_eq!("bubble".parse::<SpatialFn>().unwrap(), SpatialFn::bubble());
        assert_eq!(
            " sinsin( 2 , 3 ) ".parse::<SpatialFn>().unwrap(),
            SpatialFn::sinsin(2, 3)
        );
        assert_eq!(
            "neg_laplacian(bubble)".parse::<SpatialFn>().unwrap(),
            SpatialFn::bubble().neg_laplacian()
        );
        assert!("sinsin(0,1)".parse::<SpatialFn>().is_err());
        assert!("wobble".parse::<SpatialFn>().is_err());
        assert_eq!("cos(2)".parse::<TimeFn>().unwrap(), TimeFn::Cos(2));
        assert_eq!(
            "exp_sin2(1, 3)".parse::<TimeFn>().unwrap(),
            TimeFn::ExpSin2 { a: 1.0, b: 3.0 }
        );
        for t in [
            TimeFn::One,
            TimeFn::Sin(4),
            TimeFn::ExpSin3,
            TimeFn::ExpSin2 { a: 2.5, b: -1.0 },
        ] {
            assert_eq!(t.to_string().parse::<TimeFn>().unwrap(), t);
        }
        assert!("tan(1)".parse::<TimeFn>().is_err());
    }

    #[test]
    fn time_derivatives() {
        let h = 1e-6;
        for (g, omega) in [
            (TimeFn::Cos(2), 0.5),
            (TimeFn::Sin(3), 2.0),
            (TimeFn::ExpSin3, 1.0),
            (TimeFn::One, 1.0),
        ] {
            let d = g.derivative(omega).unwrap();
            for t in [0.3, 1.7, 4.0] {
                let exact: f64 = d.iter().map(|(c, f)| c * f.eval(t, omega)).sum();
                let fd = (g.eval(t + h, omega) - g.eval(t - h, omega)) / (2.0 * h);
                assert!((exact - fd).abs() < 1e-6 * (1.0 + exact.abs()));
            }
        }
        assert!(TimeFn::ExpSin2 { a: 1.0, b: 1.0 }.derivative(1.0).is_none());
    }
}
