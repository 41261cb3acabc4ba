//! Finite element solver for the radial Coulomb-Dirac eigenvalue problem.
//!
//! Three discretizations are provided: linear hat Galerkin, cubic Hermite
//! Galerkin and cubic Hermite streamline-upwind Petrov-Galerkin (SUPG).
//! Computed spectra can be classified against the exact point-nucleus
//! spectrum to detect spurious eigenvalues.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix `f64`.
//!
//! ```
//! use dirac_fem::{assemble, solve, Mesh, OperatorParams, PotentialModel, Scheme};
//!
//! let params = OperatorParams::new(1.0_f64, -1).unwrap();
//! let mesh = Mesh::exponential(1e-5, 60.0, 60, 12.0).unwrap();
//! let potential = PotentialModel::point(1.0);
//! let system = assemble(Scheme::HermiteGalerkin, &params, &mesh, &potential, false).unwrap();
//! let spectrum = solve(&system, 1e-8).unwrap();
//! assert!((spectrum.bindings[0] + 0.5).abs() < 1e-4);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod assembly;
pub mod discretization;
pub mod eigensolver;
pub mod error;
pub mod physics;
pub mod scalar;

pub use assembly::{
    assemble, assemble_hermite_galerkin, assemble_linear_galerkin, assemble_supg, compute_tau,
    AssembledSystem, Scheme, StabilizationProfile,
};
pub use discretization::{BasisFamily, BasisKind, HermitePart, Mesh};
pub use eigensolver::{bound_states, solve, solve_with, SolverOptions, Spectrum, Strategy};
pub use error::{DiracError, Result};
pub use physics::{
    reference_binding, reference_spectrum, OperatorParams, PotentialModel, ReferenceLevel,
    DEFAULT_LIGHT_SPEED,
};
pub use scalar::{LinalgReal, Real};

pub type Mesh64 = Mesh<f64>;
pub type OperatorParams64 = OperatorParams<f64>;
pub type PotentialModel64 = PotentialModel<f64>;
pub type AssembledSystem64 = AssembledSystem<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type StabilizationProfile64 = StabilizationProfile<f64>;
