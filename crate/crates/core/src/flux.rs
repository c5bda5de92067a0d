//! Lowest-order Raviart-Thomas reconstruction of `nu grad(eta)`.
//!
//! Normal fluxes on interior edges are the mean of the two one-sided values,
//! boundary edges take the single available one. On each triangle the field
//! `tau(x) = (a, b) + c x` is then fixed by its three edge normal fluxes.

use crate::assembly::{element_gradients, CoefficientField};
use crate::error::{Error, Result};
use crate::mesh::{Mesh, Point};

/// Edge fluxes `(nu grad eta) . n_E` averaged across each edge.
pub fn average_normal_fluxes(
    mesh: &Mesh,
    grads: &[[f64; 2]],
    nu: &CoefficientField,
) -> Result<Vec<f64>> {
    if grads.len() != mesh.num_triangles() {
        return Err(Error::DimensionMismatch {
            expected: mesh.num_triangles(),
            got: grads.len(),
        });
    }
    Ok(mesh
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let n = edge.normal;
            let side = |t: usize| grads[t][0] * n[0] + grads[t][1] * n[1];
            let weight = match nu.as_constant() {
                Some(c) => c,
                None => nu.value(mesh.edge_midpoint(e)),
            };
            match edge.right {
                Some(r) => weight * 0.5 * (side(edge.left) + side(r)),
                None => weight * side(edge.left),
            }
        })
        .collect())
}

/// A lowest-order Raviart-Thomas field, `(a, b) + c x` on each triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct RtField {
    edge_fluxes: Vec<f64>,
    /// `(a, b, c)` per triangle.
    coefficients: Vec<[f64; 3]>,
}

impl RtField {
    pub fn zero(mesh: &Mesh) -> Self {
        RtField {
            edge_fluxes: vec![0.0; mesh.num_edges()],
            coefficients: vec![[0.0; 3]; mesh.num_triangles()],
        }
    }

    pub fn edge_fluxes(&self) -> &[f64] {
        &self.edge_fluxes
    }

    pub fn coefficients(&self, t: usize) -> [f64; 3] {
        self.coefficients[t]
    }

    /// `div tau = 2c` on triangle `t`.
    #[inline]
    pub fn divergence(&self, t: usize) -> f64 {
        2.0 * self.coefficients[t][2]
    }

    #[inline]
    pub fn evaluate(&self, t: usize, x: Point) -> [f64; 2] {
        let [a, b, c] = self.coefficients[t];
        [a + c * x[0], b + c * x[1]]
    }
}

/// Extends edge normal fluxes (relative to the stored edge normals) to an RT0 field.
pub fn rt0_from_edge_fluxes(mesh: &Mesh, edge_fluxes: Vec<f64>) -> Result<RtField> {
    if edge_fluxes.len() != mesh.num_edges() {
        return Err(Error::DimensionMismatch {
            expected: mesh.num_edges(),
            got: edge_fluxes.len(),
        });
    }
    let mut coefficients = Vec::with_capacity(mesh.num_triangles());
    for t in 0..mesh.num_triangles() {
        // unknowns (a', b', c) of tau = (a', b') + c (x - x_T), x_T the centroid
        let xc = mesh.centroid(t);
        let mut m = [[0.0; 4]; 3];
        for (i, &e) in mesh.triangle_edges(t).iter().enumerate() {
            let sign = mesh.edge_sign(t, i);
            let edge = &mesh.edges()[e];
            let n = [sign * edge.normal[0], sign * edge.normal[1]];
            let p = mesh.edge_midpoint(e);
            m[i] = [
                n[0],
                n[1],
                (p[0] - xc[0]) * n[0] + (p[1] - xc[1]) * n[1],
                sign * edge_fluxes[e],
            ];
        }
        let [a, b, c] = solve3(m).ok_or(Error::DegenerateElement(t))?;
        coefficients.push([a - c * xc[0], b - c * xc[1], c]);
    }
    Ok(RtField {
        edge_fluxes,
        coefficients,
    })
}

/// RT0 reconstruction of `nu grad(eta)` for the P1 function with nodal values `nodal`.
pub fn reconstruct_flux(mesh: &Mesh, nodal: &[f64], nu: &CoefficientField) -> Result<RtField> {
    if nodal.len() != mesh.num_nodes() {
        return Err(Error::DimensionMismatch {
            expected: mesh.num_nodes(),
            got: nodal.len(),
        });
    }
    let grads = element_gradients(mesh, nodal);
    rt0_from_edge_fluxes(mesh, average_normal_fluxes(mesh, &grads, nu)?)
}

/// Gaussian elimination with partial pivoting on an augmented 3x4 system.
fn solve3(mut m: [[f64; 4]; 3]) -> Option<[f64; 3]> {
    let scale = m
        .iter()
        .flat_map(|r| r[..3].iter())
        .fold(0.0f64, |s, v| s.max(v.abs()));
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[pivot][col].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut v = m[row][3];
        for k in row + 1..3 {
            v -= m[row][k] * x[k];
        }
        x[row] = v / m[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::interpolate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fluxes_of(mesh: &Mesh, field: impl Fn(Point) -> [f64; 2]) -> Vec<f64> {
        (0..mesh.num_edges())
            .map(|e| {
                let v = field(mesh.edge_midpoint(e));
                let n = mesh.edges()[e].normal;
                v[0] * n[0] + v[1] * n[1]
            })
            .collect()
    }

    fn max_normal_jump(mesh: &Mesh, tau: &RtField) -> f64 {
        let mut worst = 0.0f64;
        for (e, edge) in mesh.edges().iter().enumerate() {
            let p = mesh.edge_midpoint(e);
            let n = edge.normal;
            let dot = |v: [f64; 2]| v[0] * n[0] + v[1] * n[1];
            let left = dot(tau.evaluate(edge.left, p));
            worst = worst.max((left - tau.edge_fluxes()[e]).abs());
            if let Some(r) = edge.right {
                worst = worst.max((dot(tau.evaluate(r, p)) - left).abs());
            }
        }
        worst
    }

    #[test]
    fn constant_field_is_reproduced() {
        let mesh = Mesh::uniform(5).unwrap();
        let tau = rt0_from_edge_fluxes(&mesh, fluxes_of(&mesh, |_| [0.7, -1.2])).unwrap();
        for t in 0..mesh.num_triangles() {
            let [a, b, c] = tau.coefficients(t);
            assert!((a - 0.7).abs() < 1e-12 && (b + 1.2).abs() < 1e-12 && c.abs() < 1e-12);
            assert!(tau.divergence(t).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_field_is_reproduced() {
        let mesh = Mesh::uniform(6).unwrap();
        let tau = rt0_from_edge_fluxes(&mesh, fluxes_of(&mesh, |x| x)).unwrap();
        for t in 0..mesh.num_triangles() {
            assert!((tau.divergence(t) - 2.0).abs() < 1e-11);
            let x = mesh.centroid(t);
            let v = tau.evaluate(t, x);
            assert!((v[0] - x[0]).abs() < 1e-12 && (v[1] - x[1]).abs() < 1e-12);
        }
        let v = tau.evaluate(0, [0.25, 0.5]);
        assert!((v[0] - 0.25).abs() < 1e-12 && (v[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_fluxes_give_zero_field() {
        let mesh = Mesh::uniform(3).unwrap();
        let tau = rt0_from_edge_fluxes(&mesh, vec![0.0; mesh.num_edges()]).unwrap();
        assert_eq!(tau, RtField::zero(&mesh));
    }

    #[test]
    fn random_fluxes_are_conforming_and_satisfy_divergence_theorem() {
        let mesh = Mesh::uniform(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let fluxes: Vec<f64> = (0..mesh.num_edges())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let tau = rt0_from_edge_fluxes(&mesh, fluxes.clone()).unwrap();
        assert!(max_normal_jump(&mesh, &tau) <= 1e-12);
        for t in 0..mesh.num_triangles() {
            let boundary_integral: f64 = mesh
                .triangle_edges(t)
                .iter()
                .enumerate()
                .map(|(i, &e)| mesh.edge_sign(t, i) * fluxes[e] * mesh.edges()[e].length)
                .sum();
            let quotient = boundary_integral / mesh.area(t);
            assert!((tau.divergence(t) - quotient).abs() <= 1e-12 * quotient.abs().max(1.0));
        }
    }

    #[test]
    fn averaging_of_equal_and_unequal_gradients() {
        let mesh = Mesh::uniform(4).unwrap();
        let one = CoefficientField::constant(1.0).unwrap();
        let f =
            average_normal_fluxes(&mesh, &vec![[1.0, 0.0]; mesh.num_triangles()], &one).unwrap();
        for (e, edge) in mesh.edges().iter().enumerate() {
            assert_eq!(f[e], edge.normal[0]);
        }
        let mut grads = vec![[0.0; 2]; mesh.num_triangles()];
        let e = mesh
            .edges()
            .iter()
            .position(|ed| !ed.is_boundary() && ed.normal[1] == 0.0)
            .unwrap();
        let edge = &mesh.edges()[e];
        grads[edge.left] = [1.0, 0.0];
        grads[edge.right.unwrap()] = [3.0, 0.0];
        let f = average_normal_fluxes(&mesh, &grads, &one).unwrap();
        assert!((f[e] - 2.0 * edge.normal[0]).abs() < 1e-15);
    }

    #[test]
    fn averaged_fluxes_match_direct_evaluation() {
        let mesh = Mesh::uniform(9).unwrap();
        let nu = CoefficientField::constant(1.0).unwrap();
        let nodal = interpolate(&mesh, &|x| x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]));
        let grads = element_gradients(&mesh, &nodal);
        let fluxes = average_normal_fluxes(&mesh, &grads, &nu).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let e = rng.gen_range(0..mesh.num_edges());
            let edge = &mesh.edges()[e];
            // gradient by hand from the three vertex values of each side
            let hand = |t: usize| {
                let [p, q, r] = mesh.vertices(t);
                let [i, j, k] = mesh.triangles()[t];
                let (u1, u2) = (nodal[j] - nodal[i], nodal[k] - nodal[i]);
                let (d1, d2) = ([q[0] - p[0], q[1] - p[1]], [r[0] - p[0], r[1] - p[1]]);
                let det = d1[0] * d2[1] - d2[0] * d1[1];
                let g = [
                    (u1 * d2[1] - u2 * d1[1]) / det,
                    (d1[0] * u2 - d2[0] * u1) / det,
                ];
                g[0] * edge.normal[0] + g[1] * edge.normal[1]
            };
            let expected = match edge.right {
                Some(r) => 0.5 * (hand(edge.left) + hand(r)),
                None => hand(edge.left),
            };
            assert!((fluxes[e] - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn linear_eta_is_recovered_exactly() {
        let mesh = Mesh::uniform(5).unwrap();
        let nu = CoefficientField::constant(2.0).unwrap();
        let nodal = interpolate(&mesh, &|x| 3.0 * x[0] - x[1]);
        let tau = reconstruct_flux(&mesh, &nodal, &nu).unwrap();
        for t in 0..mesh.num_triangles() {
            let v = tau.evaluate(t, mesh.centroid(t));
            assert!((v[0] - 6.0).abs() < 1e-12 && (v[1] + 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn reconstruction_is_linear() {
        let mesh = Mesh::uniform(4).unwrap();
        let nu = CoefficientField::constant(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u: Vec<f64> = (0..mesh.num_nodes())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let v: Vec<f64> = (0..mesh.num_nodes())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect();
        let w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| 2.0 * a - 0.5 * b).collect();
        let (tu, tv, tw) = (
            reconstruct_flux(&mesh, &u, &nu).unwrap(),
            reconstruct_flux(&mesh, &v, &nu).unwrap(),
            reconstruct_flux(&mesh, &w, &nu).unwrap(),
        );
        for t in 0..mesh.num_triangles() {
            let (a, b, c) = (tu.coefficients(t), tv.coefficients(t), tw.coefficients(t));
            for i in 0..3 {
                assert!((c[i] - (2.0 * a[i] - 0.5 * b[i])).abs() < 1e-11);
            }
        }
    }
}
