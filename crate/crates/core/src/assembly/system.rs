use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::integrals::{assemble_block, BlockMatrixSpec};
use super::layout::DofLayout;
use super::tau::{compute_tau, StabilizationProfile};
use crate::discretization::{BasisKind, Mesh};
use crate::error::{DiracError, Result};
use crate::physics::{OperatorParams, PotentialModel};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    LinearGalerkin,
    HermiteGalerkin,
    HermiteSupg,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [
        Self::LinearGalerkin,
        Self::HermiteGalerkin,
        Self::HermiteSupg,
    ];

    pub fn basis_kind(self) -> BasisKind {
        match self {
            Self::LinearGalerkin => BasisKind::LinearHat,
            Self::HermiteGalerkin | Self::HermiteSupg => BasisKind::CubicHermite,
        }
    }

    /// Galerkin pencils are symmetric with a positive definite rhs.
    pub fn is_symmetric(self) -> bool {
        !matches!(self, Self::HermiteSupg)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::LinearGalerkin => "linear-galerkin",
            Self::HermiteGalerkin => "hermite-galerkin",
            Self::HermiteSupg => "hermite-supg",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|scheme| scheme.as_str() == s)
            .ok_or_else(|| {
                format!("unknown scheme `{s}` (expected linear-galerkin, hermite-galerkin or hermite-supg)")
            })
    }
}

/// The pencil `lhs X = lambda rhs X` together with everything that produced it.
#[derive(Debug, Clone)]
pub struct AssembledSystem<T: Real> {
    pub scheme: Scheme,
    pub lhs: DMatrix<T>,
    pub rhs: DMatrix<T>,
    pub layout: DofLayout,
    pub params: OperatorParams<T>,
    pub mesh: Mesh<T>,
    pub potential: PotentialModel<T>,
    /// Present for the stabilized scheme.
    pub tau: Option<StabilizationProfile<T>>,
}

impl<T: Real> AssembledSystem<T> {
    pub fn dimension(&self) -> usize {
        self.lhs.nrows()
    }
}

fn check_inputs<T: Real>(params: &OperatorParams<T>, potential: &PotentialModel<T>) -> Result<()> {
    if potential.charge() != params.z() {
        return Err(DiracError::InvalidParams(format!(
            "potential charge {} differs from operator charge {}",
            potential.charge(),
            params.z()
        )));
    }
    Ok(())
}

/// 2x2 arrangement of component blocks.
type Blocks<T> = [[DMatrix<T>; 2]; 2];

fn compose<T: Real>(blocks: Blocks<T>) -> DMatrix<T> {
    let size = blocks[0][0].nrows();
    let mut out = DMatrix::zeros(2 * size, 2 * size);
    for (bi, row) in blocks.iter().enumerate() {
        for (bj, block) in row.iter().enumerate() {
            out.view_mut((bi * size, bj * size), (size, size))
                .copy_from(block);
        }
    }
    out
}

/// Galerkin blocks on an arbitrary layout.
fn galerkin_blocks<T: Real>(
    params: &OperatorParams<T>,
    mesh: &Mesh<T>,
    potential: &PotentialModel<T>,
    layout: &DofLayout,
) -> Result<(Blocks<T>, Blocks<T>)> {
    check_inputs(params, potential)?;
    let block = |spec| assemble_block(spec, mesh, layout, potential, None);
    let mass = block(BlockMatrixSpec::M000)?;
    let derivative = block(BlockMatrixSpec::M010)?;
    let inverse_x = block(BlockMatrixSpec::M001)?;
    let potential_mass = block(BlockMatrixSpec::M000_V)?;

    let mc2 = params.rest_energy();
    let c = params.c();
    let ck = c * params.kappa_real();
    let lhs = [
        [
            &mass * mc2 + &potential_mass,
            &derivative * (-c) + &inverse_x * ck,
        ],
        [
            &derivative * c + &inverse_x * ck,
            &mass * (-mc2) + &potential_mass,
        ],
    ];
    let zero = DMatrix::zeros(mass.nrows(), mass.ncols());
    let rhs = [[mass.clone(), zero.clone()], [zero, mass]];
    Ok((lhs, rhs))
}

/// Hat-function Galerkin discretization.
pub fn assemble_linear_galerkin<T: Real>(
    params: &OperatorParams<T>,
    mesh: &Mesh<T>,
    potential: &PotentialModel<T>,
) -> Result<AssembledSystem<T>> {
    let layout = DofLayout::new(BasisKind::LinearHat, mesh.interior_count(), false);
    let (lhs, rhs) = galerkin_blocks(params, mesh, potential, &layout)?;
    Ok(AssembledSystem {
        scheme: Scheme::LinearGalerkin,
        lhs: compose(lhs),
        rhs: compose(rhs),
        layout,
        params: *params,
        mesh: mesh.clone(),
        potential: *potential,
        tau: None,
    })
}

/// Cubic Hermite Galerkin discretization.
pub fn assemble_hermite_galerkin<T: Real>(
    params: &OperatorParams<T>,
    mesh: &Mesh<T>,
    potential: &PotentialModel<T>,
    free_lower_slope: bool,
) -> Result<AssembledSystem<T>> {
    let layout = DofLayout::new(
        BasisKind::CubicHermite,
        mesh.interior_count(),
        free_lower_slope,
    );
    let (lhs, rhs) = galerkin_blocks(params, mesh, potential, &layout)?;
    Ok(AssembledSystem {
        scheme: Scheme::HermiteGalerkin,
        lhs: compose(lhs),
        rhs: compose(rhs),
        layout,
        params: *params,
        mesh: mesh.clone(),
        potential: *potential,
        tau: None,
    })
}

/// Streamline-upwind Petrov-Galerkin discretization with cubic Hermite trial
/// functions.
///
/// Each equation is additionally tested with `tau psi'` against the residual
/// of the other equation, which adds tau-weighted blocks to both matrices.
pub fn assemble_supg<T: Real>(
    params: &OperatorParams<T>,
    mesh: &Mesh<T>,
    potential: &PotentialModel<T>,
    tau: &StabilizationProfile<T>,
    free_lower_slope: bool,
) -> Result<AssembledSystem<T>> {
    tau.check_mesh(mesh)?;
    let layout = DofLayout::new(
        BasisKind::CubicHermite,
        mesh.interior_count(),
        free_lower_slope,
    );
    let (mut lhs, mut rhs) = galerkin_blocks(params, mesh, potential, &layout)?;

    let block = |spec| assemble_block(spec, mesh, &layout, potential, Some(tau));
    let stiffness = block(BlockMatrixSpec::M110)?;
    let convection = block(BlockMatrixSpec::M100)?;
    let inverse_x = block(BlockMatrixSpec::M101)?;
    let potential_convection = block(BlockMatrixSpec::M100_V)?;

    let mc2 = params.rest_energy();
    let c = params.c();
    let ck = c * params.kappa_real();
    lhs[0][0] += &stiffness * c + &inverse_x * ck;
    lhs[0][1] += &convection * (-mc2) + &potential_convection;
    lhs[1][0] += &convection * mc2 + &potential_convection;
    lhs[1][1] += &stiffness * (-c) + &inverse_x * ck;
    rhs[0][1] += &convection;
    rhs[1][0] += &convection;

    Ok(AssembledSystem {
        scheme: Scheme::HermiteSupg,
        lhs: compose(lhs),
        rhs: compose(rhs),
        layout,
        params: *params,
        mesh: mesh.clone(),
        potential: *potential,
        tau: Some(tau.clone()),
    })
}

/// Assembles `scheme`, computing the stabilization profile from the mesh
/// when needed.
pub fn assemble<T: Real>(
    scheme: Scheme,
    params: &OperatorParams<T>,
    mesh: &Mesh<T>,
    potential: &PotentialModel<T>,
    free_lower_slope: bool,
) -> Result<AssembledSystem<T>> {
    match scheme {
        Scheme::LinearGalerkin => assemble_linear_galerkin(params, mesh, potential),
        Scheme::HermiteGalerkin => {
            assemble_hermite_galerkin(params, mesh, potential, free_lower_slope)
        }
        Scheme::HermiteSupg => assemble_supg(
            params,
            mesh,
            potential,
            &compute_tau(mesh),
            free_lower_slope,
        ),
    }
}
