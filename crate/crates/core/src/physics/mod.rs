//! Operator parameters, nuclear potentials and the exact point-nucleus spectrum.

mod params;
mod potential;
mod reference;

pub use params::{OperatorParams, DEFAULT_LIGHT_SPEED};
pub use potential::{potential_w, Branch, PotentialModel};
pub use reference::{
    accumulation_point, point_nucleus_binding, reference_binding, reference_spectrum,
    ReferenceLevel,
};
