//! Red refinement with green closure.
//!
//! Marked triangles are split into four similar children through their edge
//! midpoints. A triangle that ends up with two or three split edges is
//! upgraded to red as well; this repeats until stable. Triangles left with
//! exactly one split edge are bisected from the opposite vertex (green).
//! Green children are never acute, so callers that need acute meshes must
//! re-check regularity after refinement.

use std::collections::HashMap;

use super::tri::edge_key;
use super::{BoundaryEdge, Mesh, MeshTopology, Point, TriMesh};
use crate::error::{Error, Result};

pub const DEFAULT_CLOSURE_DEPTH: usize = 64;

/// Where a vertex of a refined mesh came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexOrigin {
    Existing(usize),
    Midpoint(usize, usize),
}

/// A refined mesh together with its relation to the coarse one.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub mesh: Mesh,
    /// Coarse element containing each fine element.
    pub parent: Vec<usize>,
    /// Origin of each fine vertex, in terms of coarse vertex indices.
    pub vertex_origin: Vec<VertexOrigin>,
}

impl Refinement {
    /// Transfer a coarse P1 nodal vector by linear interpolation.
    pub fn prolong(&self, coarse: &[f64]) -> Vec<f64> {
        self.vertex_origin
            .iter()
            .map(|o| match *o {
                VertexOrigin::Existing(v) => coarse[v],
                VertexOrigin::Midpoint(a, b) => 0.5 * (coarse[a] + coarse[b]),
            })
            .collect()
    }
}

impl TriMesh {
    pub fn refine(&self, marked: &[usize], max_closure_depth: usize) -> Result<Refinement> {
        let nt = self.n_elements();
        let mut red = vec![false; nt];
        for &e in marked {
            if e >= nt {
                return Err(Error::InvalidMesh(format!(
                    "marked element {e} out of range (mesh has {nt})"
                )));
            }
            red[e] = true;
        }

        let mut split: HashMap<(usize, usize), ()> = HashMap::new();
        let mark_edges = |t: [usize; 3], split: &mut HashMap<(usize, usize), ()>| {
            for i in 0..3 {
                split.insert(edge_key(t[i], t[(i + 1) % 3]), ());
            }
        };
        for e in (0..nt).filter(|&e| red[e]) {
            mark_edges(self.triangle(e), &mut split);
        }
        let mut depth = 0;
        loop {
            let upgrade: Vec<usize> = (0..nt)
                .filter(|&e| !red[e])
                .filter(|&e| {
                    let t = self.triangle(e);
                    (0..3)
                        .filter(|&i| split.contains_key(&edge_key(t[i], t[(i + 1) % 3])))
                        .count()
                        >= 2
                })
                .collect();
            if upgrade.is_empty() {
                break;
            }
            depth += 1;
            if depth > max_closure_depth {
                return Err(Error::RefinementOverflow {
                    depth: max_closure_depth,
                });
            }
            for e in upgrade {
                red[e] = true;
                mark_edges(self.triangle(e), &mut split);
            }
        }

        let mut vertices: Vec<Point> = self.vertices().to_vec();
        let mut origin: Vec<VertexOrigin> =
            (0..vertices.len()).map(VertexOrigin::Existing).collect();
        // Deterministic midpoint numbering: walk triangles and their edges in order.
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        for t in self.triangles() {
            for i in 0..3 {
                let k = edge_key(t[i], t[(i + 1) % 3]);
                if split.contains_key(&k) && !midpoint.contains_key(&k) {
                    let (a, b) = k;
                    let (pa, pb) = (vertices[a], vertices[b]);
                    midpoint.insert(k, vertices.len());
                    vertices.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
                    origin.push(VertexOrigin::Midpoint(a, b));
                }
            }
        }
        let mid = |a: usize, b: usize| midpoint.get(&edge_key(a, b)).copied();

        let mut triangles = Vec::with_capacity(nt * 2);
        let mut parent = Vec::with_capacity(nt * 2);
        for (e, &t) in self.triangles().iter().enumerate() {
            let [a1, a2, a3] = t;
            if red[e] {
                let m12 = mid(a1, a2).unwrap();
                let m23 = mid(a2, a3).unwrap();
                let m31 = mid(a3, a1).unwrap();
                for child in [[a1, m12, m31], [m12, a2, m23], [m31, m23, a3], [m12, m23, m31]] {
                    triangles.push(child);
                    parent.push(e);
                }
                continue;
            }
            let hanging = (0..3).find_map(|i| mid(t[i], t[(i + 1) % 3]).map(|m| (i, m)));
            match hanging {
                None => {
                    triangles.push(t);
                    parent.push(e);
                }
                Some((i, m)) => {
                    // Edge (t[i], t[i+1]) is split; bisect from the opposite vertex.
                    let (p, q, apex) = (t[i], t[(i + 1) % 3], t[(i + 2) % 3]);
                    triangles.push([p, m, apex]);
                    triangles.push([m, q, apex]);
                    parent.push(e);
                    parent.push(e);
                }
            }
        }

        let mut boundary = Vec::with_capacity(self.boundary_edges().len());
        for be in self.boundary_edges() {
            let [a, b] = be.vertices;
            match mid(a, b) {
                Some(m) => {
                    boundary.push(BoundaryEdge {
                        vertices: [a, m],
                        label: be.label,
                    });
                    boundary.push(BoundaryEdge {
                        vertices: [m, b],
                        label: be.label,
                    });
                }
                None => boundary.push(*be),
            }
        }

        let mesh = TriMesh::new(vertices, triangles, boundary)?;
        Ok(Refinement {
            mesh: Mesh::Triangle(mesh),
            parent,
            vertex_origin: origin,
        })
    }
}
