//! Continuous piecewise-linear finite elements: matrices, load vectors and
//! quadrature on the triangulation, with homogeneous Dirichlet conditions
//! imposed by eliminating boundary nodes.

mod coefficient;
mod quadrature;

pub use coefficient::{CoefficientField, ScalarFn};
pub use quadrature::{gauss_legendre_unit, QuadratureRule};

use crate::error::{Error, Result};
use crate::linalg::CsrMatrix;
use crate::mesh::{Mesh, Point};

/// Bijection between the free (non-eliminated) nodes and the unknowns.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletMap {
    node_to_dof: Vec<Option<usize>>,
    dof_to_node: Vec<usize>,
}

impl DirichletMap {
    /// Eliminates every boundary node.
    pub fn new(mesh: &Mesh) -> Self {
        Self::from_flags(mesh.boundary_flags())
    }

    /// Keeps every node free; used for the unconstrained matrices.
    pub fn all_nodes(mesh: &Mesh) -> Self {
        Self::from_flags(&vec![false; mesh.num_nodes()])
    }

    fn from_flags(eliminated: &[bool]) -> Self {
        let mut node_to_dof = vec![None; eliminated.len()];
        let mut dof_to_node = Vec::new();
        for (node, &gone) in eliminated.iter().enumerate() {
            if !gone {
                node_to_dof[node] = Some(dof_to_node.len());
                dof_to_node.push(node);
            }
        }
        DirichletMap {
            node_to_dof,
            dof_to_node,
        }
    }

    pub fn num_dofs(&self) -> usize {
        self.dof_to_node.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.node_to_dof.len()
    }

    pub fn dof(&self, node: usize) -> Option<usize> {
        self.node_to_dof[node]
    }

    pub fn node(&self, dof: usize) -> usize {
        self.dof_to_node[dof]
    }

    /// Nodes removed from the system, ascending.
    pub fn eliminated(&self) -> Vec<usize> {
        (0..self.num_nodes())
            .filter(|&n| self.node_to_dof[n].is_none())
            .collect()
    }

    /// Nodal vector from unknowns, zero on eliminated nodes.
    pub fn expand(&self, dofs: &[f64]) -> Vec<f64> {
        let mut nodal = vec![0.0; self.num_nodes()];
        for (d, &node) in self.dof_to_node.iter().enumerate() {
            nodal[node] = dofs[d];
        }
        nodal
    }

    pub fn restrict(&self, nodal: &[f64]) -> Vec<f64> {
        self.dof_to_node.iter().map(|&n| nodal[n]).collect()
    }

    fn check(&self, mesh: &Mesh) -> Result<()> {
        if self.num_nodes() != mesh.num_nodes() {
            return Err(Error::DimensionMismatch {
                expected: mesh.num_nodes(),
                got: self.num_nodes(),
            });
        }
        Ok(())
    }
}

/// Gradients of the three barycentric basis functions of a triangle.
pub fn p1_gradients(vertices: [Point; 3]) -> [[f64; 2]; 3] {
    let [a, b, c] = vertices;
    let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    let mut g = [[0.0; 2]; 3];
    for i in 0..3 {
        let p = vertices[(i + 1) % 3];
        let q = vertices[(i + 2) % 3];
        g[i] = [(p[1] - q[1]) / det, (q[0] - p[0]) / det];
    }
    g
}

/// `nu * |T| * grad(phi_i) . grad(phi_j)`.
pub fn element_stiffness(vertices: [Point; 3], nu: f64) -> [[f64; 3]; 3] {
    let g = p1_gradients(vertices);
    let [a, b, c] = vertices;
    let area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])).abs();
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = nu * area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
        }
    }
    k
}

/// `(sigma |T| / 12) [[2,1,1],[1,2,1],[1,1,2]]`.
pub fn element_mass(area: f64, sigma: f64) -> [[f64; 3]; 3] {
    let d = sigma * area / 6.0;
    let o = sigma * area / 12.0;
    [[d, o, o], [o, d, o], [o, o, d]]
}

fn scatter(
    mesh: &Mesh,
    dmap: &DirichletMap,
    mut element: impl FnMut(usize) -> [[f64; 3]; 3],
) -> Result<CsrMatrix> {
    dmap.check(mesh)?;
    let mut triplets = Vec::with_capacity(9 * mesh.num_triangles());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let local = element(t);
        for i in 0..3 {
            let Some(di) = dmap.dof(tri[i]) else { continue };
            for j in 0..3 {
                if let Some(dj) = dmap.dof(tri[j]) {
                    triplets.push((di, dj, local[i][j]));
                }
            }
        }
    }
    CsrMatrix::from_triplets(dmap.num_dofs(), &triplets)
}

/// `K_ij = int nu grad(phi_i) . grad(phi_j)`.
///
/// Variable `nu` is averaged per element with the edge-midpoint rule.
pub fn assemble_stiffness(
    mesh: &Mesh,
    nu: &CoefficientField,
    dmap: &DirichletMap,
) -> Result<CsrMatrix> {
    nu.validate_on(mesh)?;
    let rule = QuadratureRule::midpoints();
    scatter(mesh, dmap, |t| {
        let weight = match nu.as_constant() {
            Some(c) => c,
            None => rule
                .iter()
                .map(|(b, w)| w * nu.value(mesh.map_point(t, b)))
                .sum(),
        };
        element_stiffness(mesh.vertices(t), weight)
    })
}

/// `M_ij = int sigma phi_i phi_j`.
///
/// Variable `sigma` uses the degree-5 rule.
pub fn assemble_mass(
    mesh: &Mesh,
    sigma: &CoefficientField,
    dmap: &DirichletMap,
) -> Result<CsrMatrix> {
    sigma.validate_on(mesh)?;
    let rule = QuadratureRule::degree5();
    scatter(mesh, dmap, |t| {
        let area = mesh.area(t);
        match sigma.as_constant() {
            Some(c) => element_mass(area, c),
            None => {
                let mut m = [[0.0; 3]; 3];
                for (b, w) in rule.iter() {
                    let s = w * area * sigma.value(mesh.map_point(t, b));
                    for i in 0..3 {
                        for j in 0..3 {
                            m[i][j] += s * (b[i] * b[j]);
                        }
                    }
                }
                m
            }
        }
    })
}

/// `b_j = int s phi_j` over the free nodes.
pub fn assemble_load(
    mesh: &Mesh,
    s: &dyn Fn(Point) -> f64,
    rule: &QuadratureRule,
    dmap: &DirichletMap,
) -> Result<Vec<f64>> {
    dmap.check(mesh)?;
    let mut load = vec![0.0; dmap.num_dofs()];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let area = mesh.area(t);
        let mut local = [0.0; 3];
        for (b, w) in rule.iter() {
            let v = w * area * s(mesh.map_point(t, b));
            for i in 0..3 {
                local[i] += v * b[i];
            }
        }
        for i in 0..3 {
            if let Some(d) = dmap.dof(tri[i]) {
                load[d] += local[i];
            }
        }
    }
    Ok(load)
}

/// `sum_T |T| sum_q w_q g(t, bary_q, x_q)`, summed element by element in order.
pub fn integrate_elementwise(
    mesh: &Mesh,
    rule: &QuadratureRule,
    mut g: impl FnMut(usize, [f64; 3], Point) -> f64,
) -> f64 {
    let mut total = 0.0;
    for t in 0..mesh.num_triangles() {
        let mut local = 0.0;
        for (b, w) in rule.iter() {
            local += w * g(t, b, mesh.map_point(t, b));
        }
        total += mesh.area(t) * local;
    }
    total
}

pub fn integrate(f: &dyn Fn(Point) -> f64, mesh: &Mesh, rule: &QuadratureRule) -> f64 {
    integrate_elementwise(mesh, rule, |_, _, x| f(x))
}

pub fn l2_norm_on_mesh(f: &dyn Fn(Point) -> f64, mesh: &Mesh, rule: &QuadratureRule) -> f64 {
    integrate_elementwise(mesh, rule, |_, _, x| {
        let v = f(x);
        v * v
    })
    .sqrt()
}

/// Nodal values of `f`.
pub fn interpolate(mesh: &Mesh, f: &dyn Fn(Point) -> f64) -> Vec<f64> {
    mesh.nodes().iter().map(|&x| f(x)).collect()
}

/// Value of the P1 function with nodal values `nodal` at barycentric point `bary` of `t`.
#[inline]
pub fn p1_value(mesh: &Mesh, nodal: &[f64], t: usize, bary: [f64; 3]) -> f64 {
    let [a, b, c] = mesh.triangles()[t];
    bary[0] * nodal[a] + bary[1] * nodal[b] + bary[2] * nodal[c]
}

/// Constant gradient of a P1 function on every triangle.
pub fn element_gradients(mesh: &Mesh, nodal: &[f64]) -> Vec<[f64; 2]> {
    mesh.triangles()
        .iter()
        .enumerate()
        .map(|(t, tri)| {
            let g = p1_gradients(mesh.vertices(t));
            let mut grad = [0.0; 2];
            for i in 0..3 {
                grad[0] += nodal[tri[i]] * g[i][0];
                grad[1] += nodal[tri[i]] * g[i][1];
            }
            grad
        })
        .collect()
}
