use crate::assembly::{
    element_gradients, integrate_elementwise, p1_value, CoefficientField, QuadratureRule,
};
use crate::error::{Error, Result};
use crate::flux::RtField;
use crate::fourier::{CoefficientPair, SpatialPair};
use crate::mesh::Mesh;

/// Cosine and sine flux of one harmonic.
#[derive(Debug, Clone, Copy)]
pub struct FluxPair<'a> {
    pub c: &'a RtField,
    pub s: &'a RtField,
}

fn check_nodal(mesh: &Mesh, eta: &CoefficientPair) -> Result<()> {
    if eta.len() != mesh.num_nodes() {
        return Err(Error::DimensionMismatch {
            expected: mesh.num_nodes(),
            got: eta.len(),
        });
    }
    Ok(())
}

/// `||R1_k||` with
///
/// ```text
/// R1_k^c = -k w sigma eta^s + div tau^c + f^c
/// R1_k^s =  k w sigma eta^c + div tau^s + f^s
/// ```
///
/// `eta` holds nodal values. For `k = 0` this reduces to `||div tau^c + f^c||`
/// when the sine parts vanish.
#[allow(clippy::too_many_arguments)]
pub fn residual1_mode(
    k: usize,
    eta: &CoefficientPair,
    tau: FluxPair<'_>,
    f: &SpatialPair,
    omega: f64,
    sigma: &CoefficientField,
    mesh: &Mesh,
    rule: &QuadratureRule,
) -> Result<f64> {
    check_nodal(mesh, eta)?;
    let kw = k as f64 * omega;
    let sq = integrate_elementwise(mesh, rule, |t, b, x| {
        let s = kw * sigma.value(x);
        let rc = -s * p1_value(mesh, &eta.s, t, b) + tau.c.divergence(t) + f.c.eval(x);
        let rs = s * p1_value(mesh, &eta.c, t, b) + tau.s.divergence(t) + f.s.eval(x);
        rc * rc + rs * rs
    });
    Ok(sq.max(0.0).sqrt())
}

/// `||R2_k|| = ||(tau^c - nu grad eta^c, tau^s - nu grad eta^s)||`.
pub fn residual2_mode(
    eta: &CoefficientPair,
    tau: FluxPair<'_>,
    nu: &CoefficientField,
    mesh: &Mesh,
    rule: &QuadratureRule,
) -> Result<f64> {
    check_nodal(mesh, eta)?;
    let gc = element_gradients(mesh, &eta.c);
    let gs = element_gradients(mesh, &eta.s);
    let sq = integrate_elementwise(mesh, rule, |t, _, x| {
        let n = nu.value(x);
        let (vc, vs) = (tau.c.evaluate(t, x), tau.s.evaluate(t, x));
        let d = [
            vc[0] - n * gc[t][0],
            vc[1] - n * gc[t][1],
            vs[0] - n * gs[t][0],
            vs[1] - n * gs[t][1],
        ];
        d.iter().map(|v| v * v).sum()
    });
    Ok(sq.max(0.0).sqrt())
}

/// `L2` norm and gradient norm of `u_k - eta_k`, cosine and sine parts combined.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModeError {
    pub l2: f64,
    pub grad: f64,
}

impl ModeError {
    /// `|u_k - eta_k|_1`
    pub fn seminorm(&self) -> f64 {
        self.grad
    }

    /// `||u_k - eta_k||_1`
    pub fn norm(&self) -> f64 {
        self.l2.hypot(self.grad)
    }
}

pub fn exact_error_mode(
    eta: &CoefficientPair,
    u: &SpatialPair,
    mesh: &Mesh,
    rule: &QuadratureRule,
) -> Result<ModeError> {
    check_nodal(mesh, eta)?;
    let gc = element_gradients(mesh, &eta.c);
    let gs = element_gradients(mesh, &eta.s);
    let (mut l2, mut grad) = (0.0, 0.0);
    for t in 0..mesh.num_triangles() {
        let (mut el, mut eg) = (0.0, 0.0);
        for (b, w) in rule.iter() {
            let x = mesh.map_point(t, b);
            let ec = u.c.eval(x) - p1_value(mesh, &eta.c, t, b);
            let es = u.s.eval(x) - p1_value(mesh, &eta.s, t, b);
            let (uc, us) = (u.c.grad(x), u.s.grad(x));
            let d = [
                uc[0] - gc[t][0],
                uc[1] - gc[t][1],
                us[0] - gs[t][0],
                us[1] - gs[t][1],
            ];
            el += w * (ec * ec + es * es);
            eg += w * d.iter().map(|v| v * v).sum::<f64>();
        }
        let area = mesh.area(t);
        l2 += area * el;
        grad += area * eg;
    }
    Ok(ModeError {
        l2: l2.sqrt(),
        grad: grad.sqrt(),
    })
}
