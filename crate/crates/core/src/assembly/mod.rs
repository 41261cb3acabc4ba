//! Element integrals, block matrices and the three discretized pencils.

mod dump;
mod integrals;
mod layout;
mod system;
mod tau;

pub use dump::write_triplets;
pub use integrals::{
    assemble_block, closed_form_element_entries, element_integral, BasisDof, BlockMatrixSpec,
    ClosedFormRows, Weight,
};
pub use layout::DofLayout;
pub use system::{
    assemble, assemble_hermite_galerkin, assemble_linear_galerkin, assemble_supg, AssembledSystem,
    Scheme,
};
pub use tau::{compute_tau, stability_parameter, StabilizationProfile};
