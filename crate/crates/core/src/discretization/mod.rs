//! Mesh, basis families and element quadrature.

mod basis;
mod interpolation;
mod mesh;
mod quadrature;

pub use basis::{hat_shapes, hermite_shapes, BasisFamily, BasisKind, HermitePart, Shape};
pub use interpolation::{
    hermite_interpolation_error_order, HermiteInterpolant, InterpolationStudy,
};
pub use mesh::{Grading, Mesh, MeshSpec};
pub use quadrature::{quadrature_for, QuadratureRule, GAUSS4_NODES, GAUSS4_WEIGHTS};
