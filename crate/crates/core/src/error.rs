use thiserror::Error;

/// Errors raised anywhere in the solver pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiracError {
    #[error("invalid domain [{a}, {b}]: need 0 < a < b")]
    InvalidDomain { a: f64, b: f64 },

    #[error("invalid count: {0}")]
    InvalidCount(String),

    #[error("mesh grading must be positive and finite, got {0}")]
    InvalidGrading(f64),

    #[error("mesh nodes must be strictly increasing (violated at node {index})")]
    NonMonotoneNodes { index: usize },

    #[error("derivative order {0} is not supported (only 0 and 1)")]
    UnsupportedOrder(u8),

    #[error("{what} index {index} outside {lo}..={hi}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        lo: usize,
        hi: usize,
    },

    #[error("position {x} lies outside the mesh [{a}, {b}]")]
    OutsideDomain { x: f64, a: f64, b: f64 },

    #[error("basis mismatch: {0}")]
    BasisMismatch(&'static str),

    #[error("degenerate fit: need at least 3 mesh sizes, got {0}")]
    DegenerateFit(usize),

    #[error("invalid operator parameters: {0}")]
    InvalidParams(String),

    #[error("supercritical charge: Z = {z} is not below c|kappa| = {limit}")]
    Supercritical { z: f64, limit: f64 },

    #[error("radial quantum number n_r = {n_r} does not exist for kappa = {kappa}")]
    InvalidRadialNumber { kappa: i32, n_r: u32 },

    #[error("potential is singular at x = {0}")]
    Singularity(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("rhs matrix is numerically singular")]
    SingularRhs,

    #[error("complex eigenvalue {re} {im:+}i violates the reality tolerance")]
    ComplexSpectrum { re: f64, im: f64 },

    #[error("eigen decomposition failed: {0}")]
    Decomposition(String),

    #[error("only {found} bound states found, {requested} requested")]
    InsufficientLevels { found: usize, requested: usize },

    #[error("eigenvectors were not requested from the solver")]
    MissingEigenvectors,

    #[error("computed bindings are not sorted ascending")]
    UnorderedInput,

    #[error("match tolerance {0} outside (0, 0.1)")]
    InvalidTolerance(f64),

    #[error("operation needs a cubic Hermite discretization")]
    RequiresHermite,

    #[error("second-order coefficient singular at x = {x}")]
    CoefficientSingularity { x: f64 },

    #[error("degenerate limit pencil: {0}")]
    DegeneratePencil(&'static str),
}

impl DiracError {
    /// True for violations of the physical parameter invariants.
    pub fn is_physics_invariant(&self) -> bool {
        matches!(
            self,
            Self::InvalidParams(_)
                | Self::Supercritical { .. }
                | Self::InvalidRadialNumber { .. }
                | Self::Singularity(_)
        )
    }

    /// True for failures raised while solving or post-processing a pencil.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Self::SingularRhs
                | Self::ComplexSpectrum { .. }
                | Self::Decomposition(_)
                | Self::InsufficientLevels { .. }
                | Self::MissingEigenvectors
                | Self::CoefficientSingularity { .. }
                | Self::DegeneratePencil(_)
        )
    }
}

pub type Result<T, E = DiracError> = std::result::Result<T, E>;
