//! P1 elements: basis gradients, coefficient-weighted element matrices,
//! load vectors, global assembly and field output.

mod assembly;
mod element;
mod field;
mod norms;
mod output;
mod quadrature;
mod sparse;

pub use assembly::{
    assemble, assemble_load, assemble_stiffness, element_matrices, eliminate_dirichlet,
    nonlinear_residual, AssemblyOptions, ElementMatrix, LinearSystem, ResidualNorms, ScalarRef,
};
pub use element::{
    basis_gradients, element_stiffness, grad_inner_products, interval_stiffness,
    mean_coefficient_tri, ElementGradients,
};
pub use field::FeField;
pub use norms::error_norms;
pub use output::{read_csv, write_csv, write_vtk};
pub use quadrature::{gauss_legendre, interval_rule, triangle_rule, TriangleRule};
pub use sparse::CsrMatrix;
