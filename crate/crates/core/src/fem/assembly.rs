//! Global assembly with Dirichlet elimination.
//!
//! Element matrices are computed in parallel and collected in element
//! order; the triplet list and hence the summation order is the same for
//! any number of threads.

use rayon::prelude::*;
use serde::Serialize;

use super::element::{element_stiffness, interval_stiffness};
use super::field::FeField;
use super::quadrature::{interval_rule, triangle_rule};
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::geometry::{BoundaryLabel, Mesh, MeshTopology, Point};
use crate::models::CoefficientModel;

pub type ScalarRef<'a> = &'a (dyn Fn(Point) -> f64 + Send + Sync);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AssemblyOptions {
    /// Polynomial degree integrated exactly when averaging the coefficient.
    pub stiffness_order: usize,
    /// Degree for the source and Neumann integrals.
    pub load_order: usize,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self {
            stiffness_order: 2,
            load_order: 2,
        }
    }
}

/// Element matrix in local vertex order; 1D elements use the leading 2x2 block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementMatrix {
    pub vertices: [usize; 3],
    pub size: usize,
    pub k: [[f64; 3]; 3],
}

pub fn element_matrices(
    mesh: &Mesh,
    model: &CoefficientModel,
    u: &[f64],
    order: usize,
) -> Result<Vec<ElementMatrix>> {
    (0..mesh.n_elements())
        .into_par_iter()
        .map(|e| match mesh {
            Mesh::Interval(m) => {
                let (a, b) = (m.breakpoints()[e], m.breakpoints()[e + 1]);
                let k2 = interval_stiffness(a, b, model, [u[e], u[e + 1]], order)?;
                let mut k = [[0.0; 3]; 3];
                for i in 0..2 {
                    k[i][..2].copy_from_slice(&k2[i]);
                }
                Ok(ElementMatrix {
                    vertices: [e, e + 1, usize::MAX],
                    size: 2,
                    k,
                })
            }
            Mesh::Triangle(m) => {
                let t = m.triangle(e);
                let k = element_stiffness(
                    &m.triangle_points(e),
                    model,
                    [u[t[0]], u[t[1]], u[t[2]]],
                    order,
                )
                .map_err(|err| match err {
                    Error::DegenerateElement { area, .. } => Error::DegenerateElement {
                        element: Some(e),
                        area,
                    },
                    other => other,
                })?;
                Ok(ElementMatrix {
                    vertices: t,
                    size: 3,
                    k,
                })
            }
        })
        .collect()
}

/// Stiffness over all vertices, without boundary conditions.
pub fn assemble_stiffness(
    mesh: &Mesh,
    model: &CoefficientModel,
    u: &[f64],
    order: usize,
) -> Result<CsrMatrix> {
    let n = mesh.n_vertices();
    let mut triplets = Vec::with_capacity(9 * mesh.n_elements());
    for em in element_matrices(mesh, model, u, order)? {
        for i in 0..em.size {
            for j in 0..em.size {
                triplets.push((em.vertices[i], em.vertices[j], em.k[i][j]));
            }
        }
    }
    Ok(CsrMatrix::from_triplets(n, n, &triplets))
}

/// `int f phi_i + int_{Gamma_N} psi phi_i` for every vertex `i`. In 1D the
/// Neumann term is the point value `psi(a) phi_i(a)` at a Neumann end.
pub fn assemble_load(mesh: &Mesh, f: ScalarRef, psi: ScalarRef, order: usize) -> Vec<f64> {
    let mut load = vec![0.0; mesh.n_vertices()];
    match mesh {
        Mesh::Interval(m) => {
            let (pts, wts) = interval_rule(order);
            for e in 0..m.n_elements() {
                let (a, h) = (m.breakpoints()[e], m.h(e));
                for (&r, &w) in pts.iter().zip(&wts) {
                    let fx = f([a + r * h, 0.0]) * w * h;
                    load[e] += fx * (1.0 - r);
                    load[e + 1] += fx * r;
                }
            }
            for (v, label) in m.boundary() {
                if label == BoundaryLabel::Neumann {
                    load[v] += psi(m.vertex(v));
                }
            }
        }
        Mesh::Triangle(m) => {
            let rule = triangle_rule(order);
            for e in 0..m.n_elements() {
                let t = m.triangle(e);
                let p = m.triangle_points(e);
                let area = m.quality(e).area;
                for (b, w) in rule.points.iter().zip(&rule.weights) {
                    let x = [
                        b[0] * p[0][0] + b[1] * p[1][0] + b[2] * p[2][0],
                        b[0] * p[0][1] + b[1] * p[1][1] + b[2] * p[2][1],
                    ];
                    let fx = f(x) * w * area;
                    for i in 0..3 {
                        load[t[i]] += fx * b[i];
                    }
                }
            }
            let (pts, wts) = interval_rule(order);
            for be in m
                .boundary_edges()
                .iter()
                .filter(|b| b.label == BoundaryLabel::Neumann)
            {
                let [va, vb] = be.vertices;
                let (a, b) = (m.vertex(va), m.vertex(vb));
                let len = (b[0] - a[0]).hypot(b[1] - a[1]);
                for (&r, &w) in pts.iter().zip(&wts) {
                    let x = [a[0] + r * (b[0] - a[0]), a[1] + r * (b[1] - a[1])];
                    let g = psi(x) * w * len;
                    load[va] += g * (1.0 - r);
                    load[vb] += g * r;
                }
            }
        }
    }
    load
}

/// Linear system over the free (non-Dirichlet) vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// Mesh vertex of each unknown.
    pub free: Vec<usize>,
    pub vertex_to_free: Vec<Option<usize>>,
}

impl LinearSystem {
    /// Full nodal vector: `x` at free vertices, `boundary` elsewhere.
    pub fn expand(&self, x: &[f64], boundary: &[f64]) -> Vec<f64> {
        let mut out = boundary.to_vec();
        for (k, &v) in self.free.iter().enumerate() {
            out[v] = x[k];
        }
        out
    }
}

/// Eliminate Dirichlet rows and columns from a full system. The Dirichlet
/// values are read from `u`.
pub fn eliminate_dirichlet(
    mesh: &Mesh,
    full: &CsrMatrix,
    load: &[f64],
    u: &[f64],
) -> Result<LinearSystem> {
    let free = mesh.free_vertices();
    if free.len() == mesh.n_vertices() {
        return Err(Error::UnsupportedBc("no Dirichlet vertex".into()));
    }
    let mut vertex_to_free = vec![None; mesh.n_vertices()];
    for (k, &v) in free.iter().enumerate() {
        vertex_to_free[v] = Some(k);
    }
    let mut triplets = Vec::with_capacity(full.nnz());
    let mut rhs = Vec::with_capacity(free.len());
    for (k, &v) in free.iter().enumerate() {
        let mut b = load[v];
        let (cols, vals) = full.row(v);
        for (&c, &a) in cols.iter().zip(vals) {
            match vertex_to_free[c] {
                Some(j) => triplets.push((k, j, a)),
                None => b -= a * u[c],
            }
        }
        rhs.push(b);
    }
    Ok(LinearSystem {
        matrix: CsrMatrix::from_triplets(free.len(), free.len(), &triplets),
        rhs,
        free,
        vertex_to_free,
    })
}

/// Assemble `K(u) x = F` over free vertices with `kappa` frozen at `u`.
/// Dirichlet values are taken from `u` itself.
pub fn assemble(
    mesh: &Mesh,
    model: &CoefficientModel,
    u: &FeField,
    f: ScalarRef,
    psi: ScalarRef,
    opts: &AssemblyOptions,
) -> Result<LinearSystem> {
    if mesh.n_vertices() != u.len() {
        return Err(Error::MeshMismatch);
    }
    let full = assemble_stiffness(mesh, model, u.values(), opts.stiffness_order)?;
    let load = assemble_load(mesh, f, psi, opts.load_order);
    eliminate_dirichlet(mesh, &full, &load, u.values())
}

/// Residual of the nonlinear discrete system at `u`, over free vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualNorms {
    /// `max_i |(K(u) u - F)_i|`.
    pub residual: f64,
    /// `max_i |F_i|`.
    pub load: f64,
    /// `max(max_i |F_i|, max_i sum_j |K_ij u_j|)`, a scale for `residual`.
    pub scale: f64,
}

pub fn nonlinear_residual(
    mesh: &Mesh,
    model: &CoefficientModel,
    u: &[f64],
    load: &[f64],
    opts: &AssemblyOptions,
) -> Result<ResidualNorms> {
    let k = assemble_stiffness(mesh, model, u, opts.stiffness_order)?;
    let mut out = ResidualNorms {
        residual: 0.0,
        load: 0.0,
        scale: 0.0,
    };
    for v in mesh.free_vertices() {
        let (cols, vals) = k.row(v);
        let mut ku = 0.0;
        let mut mag = 0.0;
        for (&c, &a) in cols.iter().zip(vals) {
            ku += a * u[c];
            mag += (a * u[c]).abs();
        }
        out.residual = out.residual.max((ku - load[v]).abs());
        out.load = out.load.max(load[v].abs());
        out.scale = out.scale.max(mag);
    }
    out.scale = out.scale.max(out.load);
    Ok(out)
}
