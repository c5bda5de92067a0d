//! Guaranteed upper bounds for the error of a multiharmonic approximation.
//!
//! Every bound is built from two residual norms: `R1`, the equation residual
//! `f - sigma d/dt eta + div tau`, and `R2 = tau - nu grad eta`, scaled by a
//! stability constant.

mod residual;

pub use residual::{exact_error_mode, residual1_mode, residual2_mode, FluxPair, ModeError};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fourier::ExactTail;

/// Friedrichs constant of the unit square, `||v|| <= C_F ||grad v||` on `H^1_0`.
pub fn friedrichs_unit_square() -> f64 {
    1.0 / (2f64.sqrt() * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorMeasure {
    /// `H^1` seminorm per mode, `H^{1,1/2}` seminorm globally.
    Seminorm,
    Norm,
}

/// Stability constants of the bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantsBundle {
    pub c_f: f64,
    pub mu1: f64,
    pub mu1_tilde: f64,
    /// Continuity constants; carried for completeness, no bound uses them.
    pub mu2: f64,
    pub mu2_tilde: f64,
    /// `c_k[k - 1]` for `k = 1..=N`.
    pub c_k: Vec<f64>,
    pub c0_norm: f64,
    pub c0_semi: f64,
}

impl ConstantsBundle {
    pub fn new(
        sigma_bounds: (f64, f64),
        nu_bounds: (f64, f64),
        omega: f64,
        truncation: usize,
        c_f: f64,
    ) -> Result<Self> {
        let (sl, su) = sigma_bounds;
        let (nl, nu_) = nu_bounds;
        for (name, v) in [("sigma", sl), ("nu", nl), ("omega", omega), ("C_F", c_f)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        let r2 = 2f64.sqrt();
        let c0_norm = nl / (c_f * c_f + 1.0);
        Ok(ConstantsBundle {
            c_f,
            mu1: c0_norm.min(sl) / r2,
            mu1_tilde: nl.min(sl) / r2,
            mu2: su.max(nu_),
            mu2_tilde: su.max(nu_),
            c_k: (1..=truncation)
                .map(|k| nl.min(k as f64 * omega * sl) / r2)
                .collect(),
            c0_norm,
            c0_semi: nl,
        })
    }

    /// Constant dividing the bound of mode `k`.
    pub fn mode_constant(&self, k: usize, measure: ErrorMeasure) -> f64 {
        match (k, measure) {
            (0, ErrorMeasure::Seminorm) => self.c0_semi,
            (0, ErrorMeasure::Norm) => self.c0_norm,
            (k, _) => self.c_k[k - 1],
        }
    }
}

/// `(C_F r1 + r2) / c_k`
pub fn majorant_seminorm_mode(k: usize, r1: f64, r2: f64, constants: &ConstantsBundle) -> f64 {
    (constants.c_f * r1 + r2) / constants.mode_constant(k, ErrorMeasure::Seminorm)
}

/// `sqrt(r1^2 + r2^2) / c_k`
pub fn majorant_norm_mode(k: usize, r1: f64, r2: f64, constants: &ConstantsBundle) -> f64 {
    r1.hypot(r2) / constants.mode_constant(k, ErrorMeasure::Norm)
}

/// Space-time residual norms assembled from per-mode values.
///
/// `||R1||^2 = T r1_0^2 + (T/2) sum_k r1_k^2 + E_N`, and the same for `R2` without `E_N`.
pub fn global_residuals(r1: &[f64], r2: &[f64], e_n: f64, period: f64) -> (f64, f64) {
    let weighted = |r: &[f64]| -> f64 {
        r.iter()
            .enumerate()
            .map(|(k, v)| {
                if k == 0 {
                    period * v * v
                } else {
                    0.5 * period * v * v
                }
            })
            .sum()
    };
    ((weighted(r1) + e_n).sqrt(), weighted(r2).sqrt())
}

/// Bound for the whole space-time error from per-mode residual norms.
pub fn majorant_global(
    r1: &[f64],
    r2: &[f64],
    e_n: f64,
    period: f64,
    constants: &ConstantsBundle,
    measure: ErrorMeasure,
) -> f64 {
    let (g1, g2) = global_residuals(r1, r2, e_n, period);
    match measure {
        ErrorMeasure::Seminorm => (constants.c_f * g1 + g2) / constants.mu1_tilde,
        ErrorMeasure::Norm => g1.hypot(g2) / constants.mu1,
    }
}

/// `H^{1,1/2}` seminorm and norm of `u - eta`.
///
/// `errors[k]` holds the spatial errors of mode `k`; `tail` the harmonics of `u`
/// that the approximation does not carry.
pub fn global_error(errors: &[ModeError], tail: &ExactTail, period: f64, omega: f64) -> (f64, f64) {
    let (mut semi, mut l2) = (0.0, 0.0);
    for (k, e) in errors.iter().enumerate() {
        if k == 0 {
            semi += period * e.grad * e.grad;
            l2 += period * e.l2 * e.l2;
        } else {
            let kw = k as f64 * omega;
            semi += 0.5 * period * (kw * e.l2 * e.l2 + e.grad * e.grad);
            l2 += 0.5 * period * e.l2 * e.l2;
        }
    }
    semi += tail.grad + tail.half;
    l2 += tail.l2;
    (semi.sqrt(), (semi + l2).sqrt())
}

/// `(T/2) sum_k k omega ||eta_k||^2` from per-mode `L2` norms.
pub fn half_seminorm(l2_norms: &[f64], period: f64, omega: f64) -> f64 {
    l2_norms
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, v)| 0.5 * period * k as f64 * omega * v * v)
        .sum::<f64>()
        .sqrt()
}

pub fn efficiency_index(majorant: f64, exact_error: f64) -> Result<f64> {
    if !(exact_error > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "efficiency index needs a positive error, got {exact_error}"
        )));
    }
    Ok(majorant / exact_error)
}

/// One harmonic of one mesh level.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    pub k: usize,
    pub r1: f64,
    pub r2: f64,
    pub majorant_semi: f64,
    pub majorant_norm: f64,
    pub exact: Option<ModeError>,
    /// Seminorm majorant over the exact seminorm error.
    pub eff_index: Option<f64>,
    pub iterations: usize,
    pub solve_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalReport {
    /// `||R1||` including `E_N`.
    pub r1: f64,
    pub r2: f64,
    pub e_n: f64,
    pub majorant_semi: f64,
    pub majorant_norm: f64,
    pub exact_semi: Option<f64>,
    pub exact_norm: Option<f64>,
    pub eff_index: Option<f64>,
    /// Half-order time seminorm of the approximation; diagnostic only.
    pub eta_half_seminorm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MajorantReport {
    pub problem: String,
    pub level: usize,
    pub dofs: usize,
    pub omega: f64,
    pub period: f64,
    pub constants: ConstantsBundle,
    pub modes: Vec<ModeReport>,
    pub global: GlobalReport,
}

impl MajorantReport {
    /// Every bound against its matching exact error, as `(label, bound, error)`.
    pub fn bound_checks(&self) -> Vec<(String, f64, f64)> {
        let mut out = Vec::new();
        for m in &self.modes {
            if let Some(e) = m.exact {
                out.push((
                    format!("mode {} seminorm", m.k),
                    m.majorant_semi,
                    e.seminorm(),
                ));
                out.push((format!("mode {} norm", m.k), m.majorant_norm, e.norm()));
            }
        }
        if let (Some(s), Some(n)) = (self.global.exact_semi, self.global.exact_norm) {
            out.push(("global seminorm".into(), self.global.majorant_semi, s));
            out.push(("global norm".into(), self.global.majorant_norm, n));
        }
        out
    }
}
