use std::collections::HashMap;

use super::quality::{signed_area, triangle_quality, TriangleQuality};
use super::{BoundaryLabel, MeshTopology, Point};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub vertices: [usize; 2],
    pub label: BoundaryLabel,
}

pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Conforming triangulation with labelled boundary edges. Triangles are
/// stored counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<BoundaryEdge>,
    dirichlet: Vec<bool>,
    quality: Vec<TriangleQuality>,
}

impl TriMesh {
    /// Validate and build a mesh. Clockwise triangles are reoriented (with a
    /// warning); everything else that breaks the mesh invariants is an error.
    pub fn new(
        vertices: Vec<Point>,
        mut triangles: Vec<[usize; 3]>,
        boundary: Vec<BoundaryEdge>,
    ) -> Result<Self> {
        let nv = vertices.len();
        if let Some(v) = vertices.iter().position(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::InvalidMesh(format!("vertex {v} has non-finite coordinates")));
        }
        if triangles.is_empty() {
            return Err(Error::InvalidMesh("no triangles".into()));
        }
        for (e, t) in triangles.iter_mut().enumerate() {
            if t.iter().any(|&v| v >= nv) {
                return Err(Error::InvalidMesh(format!(
                    "triangle {e} references a vertex outside 0..{nv}"
                )));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::InvalidMesh(format!("triangle {e} repeats a vertex")));
            }
            let pts = [vertices[t[0]], vertices[t[1]], vertices[t[2]]];
            if signed_area(&pts) < 0.0 {
                log::warn!("triangle {e} is clockwise; swapping its last two vertices");
                t.swap(1, 2);
            }
        }
        let quality = triangles
            .iter()
            .enumerate()
            .map(|(e, t)| {
                triangle_quality(&[vertices[t[0]], vertices[t[1]], vertices[t[2]]]).map_err(|err| {
                    match err {
                        Error::DegenerateElement { area, .. } => Error::DegenerateElement {
                            element: Some(e),
                            area,
                        },
                        other => other,
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;

        // Directed edge counts: an interior edge must appear once in each
        // direction, a boundary edge exactly once.
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (e, t) in triangles.iter().enumerate() {
            for i in 0..3 {
                let d = (t[i], t[(i + 1) % 3]);
                if directed.insert(d, e).is_some() {
                    return Err(Error::InvalidMesh(format!(
                        "edge {:?} appears twice with the same orientation (triangle {e})",
                        d
                    )));
                }
            }
        }
        let mut open: HashMap<(usize, usize), bool> = HashMap::new();
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) {
                open.insert(edge_key(a, b), false);
            }
        }
        for be in &boundary {
            let [a, b] = be.vertices;
            match open.get_mut(&edge_key(a, b)) {
                Some(seen) if !*seen => *seen = true,
                Some(_) => {
                    return Err(Error::InvalidMesh(format!(
                        "boundary edge ({a}, {b}) listed twice"
                    )))
                }
                None => {
                    return Err(Error::InvalidMesh(format!(
                        "boundary edge ({a}, {b}) does not belong to exactly one triangle"
                    )))
                }
            }
        }
        if let Some((&(a, b), _)) = open.iter().find(|(_, seen)| !**seen) {
            return Err(Error::InvalidMesh(format!(
                "edge ({a}, {b}) lies on the boundary but has no label"
            )));
        }
        if !boundary.iter().any(|b| b.label == BoundaryLabel::Dirichlet) {
            return Err(Error::UnsupportedBc(
                "Dirichlet boundary must contain at least one edge".into(),
            ));
        }
        let mut dirichlet = vec![false; nv];
        for be in boundary.iter().filter(|b| b.label == BoundaryLabel::Dirichlet) {
            dirichlet[be.vertices[0]] = true;
            dirichlet[be.vertices[1]] = true;
        }
        Ok(Self {
            vertices,
            triangles,
            boundary,
            dirichlet,
            quality,
        })
    }

    /// Build a mesh whose boundary edges are found from the connectivity and
    /// labelled by `labeler(start, end)`.
    pub fn with_boundary_labeler(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        labeler: impl Fn(Point, Point) -> BoundaryLabel,
    ) -> Result<Self> {
        let boundary = topological_boundary(&vertices, &triangles)
            .into_iter()
            .map(|[a, b]| BoundaryEdge {
                vertices: [a, b],
                label: labeler(vertices[a], vertices[b]),
            })
            .collect();
        Self::new(vertices, triangles, boundary)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, e: usize) -> [usize; 3] {
        self.triangles[e]
    }

    pub fn triangle_points(&self, e: usize) -> [Point; 3] {
        let t = self.triangles[e];
        [self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]]
    }

    pub fn quality(&self, e: usize) -> TriangleQuality {
        self.quality[e]
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    pub fn is_acute(&self) -> bool {
        self.quality.iter().all(|q| q.acute)
    }

    /// All distinct edges as sorted vertex pairs, in first-seen order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut seen = HashMap::new();
        let mut out = Vec::new();
        for t in &self.triangles {
            for i in 0..3 {
                let k = edge_key(t[i], t[(i + 1) % 3]);
                if seen.insert(k, ()).is_none() {
                    out.push(k);
                }
            }
        }
        out
    }
}

/// Edges used by exactly one triangle, oriented as in that triangle.
pub(crate) fn topological_boundary(vertices: &[Point], triangles: &[[usize; 3]]) -> Vec<[usize; 2]> {
    let mut count: HashMap<(usize, usize), (usize, [usize; 2])> = HashMap::new();
    for t in triangles {
        let ccw = signed_area(&[vertices[t[0]], vertices[t[1]], vertices[t[2]]]) >= 0.0;
        for i in 0..3 {
            let (a, b) = (t[i], t[(i + 1) % 3]);
            let dir = if ccw { [a, b] } else { [b, a] };
            count.entry(edge_key(a, b)).or_insert((0, dir)).0 += 1;
        }
    }
    let mut edges: Vec<[usize; 2]> = count
        .into_values()
        .filter(|(c, _)| *c == 1)
        .map(|(_, d)| d)
        .collect();
    edges.sort_unstable();
    edges
}

impl MeshTopology for TriMesh {
    fn dim(&self) -> usize {
        2
    }

    fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    fn n_elements(&self) -> usize {
        self.triangles.len()
    }

    fn element_vertices(&self, element: usize) -> &[usize] {
        &self.triangles[element]
    }

    fn vertex(&self, v: usize) -> Point {
        self.vertices[v]
    }

    fn is_dirichlet(&self, v: usize) -> bool {
        self.dirichlet[v]
    }
}
