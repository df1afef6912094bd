//! Meshes, per-element geometry and conforming refinement.
//!
//! One-dimensional partitions ([`IntervalMesh`]) and conforming triangulations
//! ([`TriMesh`]) are separate types. Code that only needs connectivity and
//! boundary information works through [`MeshTopology`]; code that needs the
//! concrete element shape matches on [`Mesh`].

mod generate;
mod interval;
mod io;
mod quality;
mod refine;
mod tri;

pub use generate::{
    equilateral_triangle, perturb_interior_vertices, two_triangle_square, uniform_interval,
    unit_square_acute,
};
pub use interval::IntervalMesh;
pub use io::{read_mesh, write_mesh};
pub use quality::{
    check_regularity, jacobian, signed_area, triangle_quality, AffineMap, RegularityReport,
    RegularityViolation, TriangleQuality,
};
pub use refine::{Refinement, VertexOrigin, DEFAULT_CLOSURE_DEPTH};
pub use tri::{BoundaryEdge, TriMesh};

use serde::Serialize;

use crate::error::Result;

/// A point in the plane. One-dimensional meshes use the first coordinate and
/// leave the second at zero.
pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoundaryLabel {
    Dirichlet,
    Neumann,
}

impl BoundaryLabel {
    pub fn as_char(self) -> char {
        match self {
            BoundaryLabel::Dirichlet => 'D',
            BoundaryLabel::Neumann => 'N',
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "D" => Some(BoundaryLabel::Dirichlet),
            "N" => Some(BoundaryLabel::Neumann),
            _ => None,
        }
    }
}

/// Connectivity and boundary queries shared by 1D and 2D meshes.
pub trait MeshTopology {
    fn dim(&self) -> usize;
    fn n_vertices(&self) -> usize;
    fn n_elements(&self) -> usize;
    fn element_vertices(&self, element: usize) -> &[usize];
    fn vertex(&self, v: usize) -> Point;
    fn is_dirichlet(&self, v: usize) -> bool;

    fn dirichlet_vertices(&self) -> Vec<usize> {
        (0..self.n_vertices()).filter(|&v| self.is_dirichlet(v)).collect()
    }

    fn free_vertices(&self) -> Vec<usize> {
        (0..self.n_vertices()).filter(|&v| !self.is_dirichlet(v)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mesh {
    Interval(IntervalMesh),
    Triangle(TriMesh),
}

impl Mesh {
    pub fn as_interval(&self) -> Option<&IntervalMesh> {
        match self {
            Mesh::Interval(m) => Some(m),
            Mesh::Triangle(_) => None,
        }
    }

    pub fn as_triangle(&self) -> Option<&TriMesh> {
        match self {
            Mesh::Triangle(m) => Some(m),
            Mesh::Interval(_) => None,
        }
    }

    /// Element size: interval length in 1D, longest edge in 2D.
    pub fn element_diameter(&self, element: usize) -> f64 {
        match self {
            Mesh::Interval(m) => m.h(element),
            Mesh::Triangle(m) => {
                let [a, b, c] = m.triangle_points(element);
                let d = |p: Point, q: Point| (p[0] - q[0]).hypot(p[1] - q[1]);
                d(a, b).max(d(b, c)).max(d(c, a))
            }
        }
    }

    pub fn max_diameter(&self) -> f64 {
        (0..self.n_elements())
            .map(|e| self.element_diameter(e))
            .fold(0.0, f64::max)
    }

    /// Refine the marked elements; see [`IntervalMesh::refine`] and [`TriMesh::refine`].
    pub fn refine(&self, marked: &[usize]) -> Result<Refinement> {
        match self {
            Mesh::Interval(m) => m.refine(marked),
            Mesh::Triangle(m) => m.refine(marked, DEFAULT_CLOSURE_DEPTH),
        }
    }

    pub fn refine_uniform(&self) -> Result<Refinement> {
        let all: Vec<usize> = (0..self.n_elements()).collect();
        self.refine(&all)
    }
}

impl From<IntervalMesh> for Mesh {
    fn from(m: IntervalMesh) -> Self {
        Mesh::Interval(m)
    }
}

impl From<TriMesh> for Mesh {
    fn from(m: TriMesh) -> Self {
        Mesh::Triangle(m)
    }
}

impl MeshTopology for Mesh {
    fn dim(&self) -> usize {
        match self {
            Mesh::Interval(m) => m.dim(),
            Mesh::Triangle(m) => m.dim(),
        }
    }

    fn n_vertices(&self) -> usize {
        match self {
            Mesh::Interval(m) => m.n_vertices(),
            Mesh::Triangle(m) => m.n_vertices(),
        }
    }

    fn n_elements(&self) -> usize {
        match self {
            Mesh::Interval(m) => m.n_elements(),
            Mesh::Triangle(m) => m.n_elements(),
        }
    }

    fn element_vertices(&self, element: usize) -> &[usize] {
        match self {
            Mesh::Interval(m) => m.element_vertices(element),
            Mesh::Triangle(m) => m.element_vertices(element),
        }
    }

    fn vertex(&self, v: usize) -> Point {
        match self {
            Mesh::Interval(m) => m.vertex(v),
            Mesh::Triangle(m) => m.vertex(v),
        }
    }

    fn is_dirichlet(&self, v: usize) -> bool {
        match self {
            Mesh::Interval(m) => m.is_dirichlet(v),
            Mesh::Triangle(m) => m.is_dirichlet(v),
        }
    }
}
