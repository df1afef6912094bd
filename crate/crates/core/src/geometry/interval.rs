use super::refine::{Refinement, VertexOrigin};
use super::{BoundaryLabel, Mesh, MeshTopology, Point};
use crate::error::{Error, Result};

/// Partition `a_0 < a_1 < ... < a_n` of an interval, with a boundary
/// condition tag at each end. Element `k` is the interval `(a_k, a_{k+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMesh {
    points: Vec<f64>,
    elements: Vec<[usize; 2]>,
    left: BoundaryLabel,
    right: BoundaryLabel,
}

impl IntervalMesh {
    pub fn new(breakpoints: Vec<f64>, left: BoundaryLabel, right: BoundaryLabel) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidMesh(format!(
                "need at least 2 breakpoints, got {}",
                breakpoints.len()
            )));
        }
        if let Some(bad) = breakpoints.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidMesh(format!("breakpoint {bad} is not finite")));
        }
        if let Some(k) = breakpoints.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidMesh(format!(
                "breakpoints not strictly increasing at index {}: {} then {}",
                k + 1,
                breakpoints[k],
                breakpoints[k + 1]
            )));
        }
        if left == BoundaryLabel::Neumann && right == BoundaryLabel::Neumann {
            return Err(Error::UnsupportedBc(
                "pure Neumann problem (no Dirichlet endpoint)".into(),
            ));
        }
        let elements = (0..breakpoints.len() - 1).map(|k| [k, k + 1]).collect();
        Ok(Self {
            points: breakpoints,
            elements,
            left,
            right,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.points
    }

    pub fn left_bc(&self) -> BoundaryLabel {
        self.left
    }

    pub fn right_bc(&self) -> BoundaryLabel {
        self.right
    }

    /// Length of element `k` (`h_{k+1}` in one-based numbering).
    pub fn h(&self, k: usize) -> f64 {
        self.points[k + 1] - self.points[k]
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.points.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.points[0], *self.points.last().unwrap())
    }

    /// Endpoint vertices with their boundary labels, left first.
    pub fn boundary(&self) -> [(usize, BoundaryLabel); 2] {
        [(0, self.left), (self.points.len() - 1, self.right)]
    }

    /// Bisect every marked interval at its midpoint.
    pub fn refine(&self, marked: &[usize]) -> Result<Refinement> {
        let n = self.n_elements();
        let mut flag = vec![false; n];
        for &e in marked {
            if e >= n {
                return Err(Error::InvalidMesh(format!(
                    "marked element {e} out of range (mesh has {n})"
                )));
            }
            flag[e] = true;
        }
        let mut points = Vec::with_capacity(self.points.len() + marked.len());
        let mut origin = Vec::with_capacity(points.capacity());
        let mut parent = Vec::new();
        for (k, &split) in flag.iter().enumerate() {
            points.push(self.points[k]);
            origin.push(VertexOrigin::Existing(k));
            parent.push(k);
            if split {
                points.push(0.5 * (self.points[k] + self.points[k + 1]));
                origin.push(VertexOrigin::Midpoint(k, k + 1));
                parent.push(k);
            }
        }
        points.push(self.points[n]);
        origin.push(VertexOrigin::Existing(n));
        let mesh = IntervalMesh::new(points, self.left, self.right)?;
        Ok(Refinement {
            mesh: Mesh::Interval(mesh),
            parent,
            vertex_origin: origin,
        })
    }
}

impl MeshTopology for IntervalMesh {
    fn dim(&self) -> usize {
        1
    }

    fn n_vertices(&self) -> usize {
        self.points.len()
    }

    fn n_elements(&self) -> usize {
        self.elements.len()
    }

    fn element_vertices(&self, element: usize) -> &[usize] {
        &self.elements[element]
    }

    fn vertex(&self, v: usize) -> Point {
        [self.points[v], 0.0]
    }

    fn is_dirichlet(&self, v: usize) -> bool {
        (v == 0 && self.left == BoundaryLabel::Dirichlet)
            || (v + 1 == self.points.len() && self.right == BoundaryLabel::Dirichlet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use BoundaryLabel::*;

    #[test]
    fn single_element() {
        let m = IntervalMesh::new(vec![0.0, 1.0], Dirichlet, Dirichlet).unwrap();
        assert_eq!(m.n_elements(), 1);
        assert_eq!(m.h(0), 1.0);
    }

    #[test]
    fn lengths_are_differences() {
        let m = IntervalMesh::new(vec![0.0, 0.25, 1.0], Dirichlet, Dirichlet).unwrap();
        assert_eq!(m.lengths(), vec![0.25, 0.75]);
    }

    #[test]
    fn duplicate_breakpoint_rejected() {
        let err = IntervalMesh::new(vec![0.0, 0.5, 0.5, 1.0], Dirichlet, Dirichlet).unwrap_err();
        assert!(matches!(err, Error::InvalidMesh(_)));
    }

    #[test]
    fn pure_neumann_rejected() {
        let err = IntervalMesh::new(vec![0.0, 1.0], Neumann, Neumann).unwrap_err();
        assert!(matches!(err, Error::UnsupportedBc(_)));
    }

    #[test]
    fn mixed_dirichlet_flags() {
        let m = IntervalMesh::new(vec![0.0, 0.5, 1.0], Neumann, Dirichlet).unwrap();
        assert!(!m.is_dirichlet(0));
        assert!(!m.is_dirichlet(1));
        assert!(m.is_dirichlet(2));
    }

    #[test]
    fn bisect_marked() {
        let m = IntervalMesh::new(vec![0.0, 1.0], Dirichlet, Dirichlet).unwrap();
        let r = m.refine(&[0]).unwrap();
        let refined = r.mesh.as_interval().unwrap();
        assert_eq!(refined.breakpoints(), &[0.0, 0.5, 1.0]);
        assert_eq!(r.parent, vec![0, 0]);
        assert_eq!(r.vertex_origin[1], VertexOrigin::Midpoint(0, 1));
    }
}
