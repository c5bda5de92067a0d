//! Uniform triangulations of the unit square.
//!
//! Every square cell of an `n x n` grid is split along the diagonal from its
//! lower-left to its upper-right corner. Nodes are numbered lexicographically
//! by (row, column), triangles are stored counterclockwise, and each edge
//! carries a unit normal pointing from its left triangle to its right one
//! (outward of the domain on boundary edges).

use std::collections::HashMap;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// End points, oriented so that `left` lies on the left of `nodes[0] -> nodes[1]`.
    pub nodes: [usize; 2],
    pub left: usize,
    /// `None` on the boundary of the square.
    pub right: Option<usize>,
    /// Unit normal from `left` towards `right`.
    pub normal: Point,
    pub length: f64,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.right.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct Mesh {
    cells_per_side: usize,
    nodes: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<Edge>,
    /// Local edge `i` of a triangle is the one opposite its vertex `i`.
    triangle_edges: Vec<[usize; 3]>,
    boundary: Vec<bool>,
}

impl Mesh {
    /// Builds the uniform triangulation with `n` cells per side.
    pub fn uniform(n: usize) -> Result<Mesh> {
        if n == 0 {
            return Err(Error::InvalidMesh(
                "cells per side must be at least 1".into(),
            ));
        }
        let side = n + 1;
        let nf = n as f64;
        let mut nodes = Vec::with_capacity(side * side);
        let mut boundary = Vec::with_capacity(side * side);
        for row in 0..side {
            for col in 0..side {
                nodes.push([col as f64 / nf, row as f64 / nf]);
                boundary.push(row == 0 || col == 0 || row == n || col == n);
            }
        }

        let mut triangles = Vec::with_capacity(2 * n * n);
        for row in 0..n {
            for col in 0..n {
                let ll = row * side + col;
                let lr = ll + 1;
                let ul = ll + side;
                let ur = ul + 1;
                triangles.push([ll, lr, ur]);
                triangles.push([ll, ur, ul]);
            }
        }

        let (edges, triangle_edges) = build_edges(&nodes, &triangles);
        Ok(Mesh {
            cells_per_side: n,
            nodes,
            triangles,
            edges,
            triangle_edges,
            boundary,
        })
    }

    /// The uniform mesh with three times as many cells per side.
    pub fn refine3(&self) -> Mesh {
        Mesh::uniform(3 * self.cells_per_side).expect("refining a valid mesh")
    }

    pub fn cells_per_side(&self) -> usize {
        self.cells_per_side
    }

    pub fn h(&self) -> f64 {
        1.0 / self.cells_per_side as f64
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    /// Sign turning the stored normal of local edge `local` into the outward
    /// normal of triangle `t`.
    pub fn edge_sign(&self, t: usize, local: usize) -> f64 {
        if self.edges[self.triangle_edges[t][local]].left == t {
            1.0
        } else {
            -1.0
        }
    }

    pub fn is_boundary_node(&self, node: usize) -> bool {
        self.boundary[node]
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    /// Indices of all nodes on the boundary of the square, ascending.
    pub fn boundary_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.boundary[i])
            .collect()
    }

    pub fn vertices(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    /// Signed area; positive for counterclockwise triangles.
    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.vertices(t);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }

    pub fn area(&self, t: usize) -> f64 {
        self.signed_area(t).abs()
    }

    pub fn centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.vertices(t);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn edge_midpoint(&self, e: usize) -> Point {
        let [a, b] = self.edges[e].nodes;
        let (pa, pb) = (self.nodes[a], self.nodes[b]);
        [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]
    }

    /// Maps barycentric coordinates on triangle `t` to a physical point.
    pub fn map_point(&self, t: usize, bary: [f64; 3]) -> Point {
        let [a, b, c] = self.vertices(t);
        [
            bary[0] * a[0] + bary[1] * b[0] + bary[2] * c[0],
            bary[0] * a[1] + bary[1] * b[1] + bary[2] * c[1],
        ]
    }
}

/// Edges in order of first appearance while scanning the triangles.
fn build_edges(nodes: &[Point], triangles: &[[usize; 3]]) -> (Vec<Edge>, Vec<[usize; 3]>) {
    let mut index: HashMap<(usize, usize), usize> =
        HashMap::with_capacity(3 * triangles.len() / 2 + 1);
    let mut edges: Vec<Edge> = Vec::with_capacity(3 * triangles.len() / 2 + 1);
    let mut triangle_edges = Vec::with_capacity(triangles.len());

    for (t, tri) in triangles.iter().enumerate() {
        let mut local = [0usize; 3];
        for (i, slot) in local.iter_mut().enumerate() {
            let a = tri[(i + 1) % 3];
            let b = tri[(i + 2) % 3];
            let key = (a.min(b), a.max(b));
            *slot = match index.get(&key) {
                Some(&e) => {
                    edges[e].right = Some(t);
                    e
                }
                None => {
                    let (pa, pb) = (nodes[a], nodes[b]);
                    let tx = pb[0] - pa[0];
                    let ty = pb[1] - pa[1];
                    let length = tx.hypot(ty);
                    let e = edges.len();
                    edges.push(Edge {
                        nodes: [a, b],
                        left: t,
                        right: None,
                        normal: [ty / length, -tx / length],
                        length,
                    });
                    index.insert(key, e);
                    e
                }
            };
        }
        triangle_edges.push(local);
    }
    (edges, triangle_edges)
}
