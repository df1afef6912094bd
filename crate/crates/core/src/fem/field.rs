use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Mesh, MeshTopology, Point};

/// Nodal values of a continuous piecewise-linear function on a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct FeField {
    mesh: Arc<Mesh>,
    values: Vec<f64>,
}

impl FeField {
    pub fn from_values(mesh: Arc<Mesh>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n_vertices() {
            return Err(Error::InvalidOptions(format!(
                "field has {} values but the mesh has {} vertices",
                values.len(),
                mesh.n_vertices()
            )));
        }
        Ok(Self { mesh, values })
    }

    pub fn zeros(mesh: Arc<Mesh>) -> Self {
        let n = mesh.n_vertices();
        Self {
            mesh,
            values: vec![0.0; n],
        }
    }

    /// Nodal interpolant of `g`.
    pub fn interpolate(mesh: Arc<Mesh>, g: impl Fn(Point) -> f64) -> Self {
        let values = (0..mesh.n_vertices()).map(|v| g(mesh.vertex(v))).collect();
        Self { mesh, values }
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values of the element's vertices in element order.
    pub fn element_values(&self, element: usize) -> Vec<f64> {
        self.mesh
            .element_vertices(element)
            .iter()
            .map(|&v| self.values[v])
            .collect()
    }

    pub fn same_mesh(&self, other: &FeField) -> bool {
        Arc::ptr_eq(&self.mesh, &other.mesh) || *self.mesh == *other.mesh
    }

    /// Set Dirichlet vertices to `g`.
    pub fn impose_dirichlet(&mut self, g: impl Fn(Point) -> f64) {
        for v in self.mesh.dirichlet_vertices() {
            self.values[v] = g(self.mesh.vertex(v));
        }
    }

    pub fn max_abs_diff(&self, other: &FeField) -> Result<f64> {
        if !self.same_mesh(other) {
            return Err(Error::MeshMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{uniform_interval, BoundaryLabel};

    #[test]
    fn construction_and_mismatch() {
        let mesh: Arc<Mesh> = Arc::new(
            uniform_interval(0.0, 1.0, 4, BoundaryLabel::Dirichlet, BoundaryLabel::Neumann)
                .unwrap()
                .into(),
        );
        assert!(FeField::from_values(mesh.clone(), vec![0.0; 4]).is_err());
        let u = FeField::interpolate(mesh.clone(), |p| p[0] * 2.0);
        assert_eq!(u.values(), &[0.0, 0.5, 1.0, 1.5, 2.0]);
        let mut w = u.clone();
        w.impose_dirichlet(|_| 7.0);
        assert_eq!(w.values()[0], 7.0);
        assert_eq!(w.values()[4], 2.0);
        assert_eq!(u.max_abs_diff(&w).unwrap(), 7.0);
        let other: Arc<Mesh> = Arc::new(
            uniform_interval(0.0, 1.0, 2, BoundaryLabel::Dirichlet, BoundaryLabel::Dirichlet)
                .unwrap()
                .into(),
        );
        assert!(matches!(
            u.max_abs_diff(&FeField::zeros(other)),
            Err(Error::MeshMismatch)
        ));
    }
}
