use serde::{Deserialize, Serialize};

use super::params::OperatorParams;
use crate::error::{DiracError, Result};
use crate::scalar::Real;

/// One exact point-nucleus level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceLevel<T> {
    pub kappa: i32,
    /// Radial quantum number; starts at 0 for `kappa < 0` and at 1 for `kappa > 0`.
    pub n_r: u32,
    /// `lambda - mc^2`.
    pub binding: T,
}

/// Dirac-Coulomb binding energy for arbitrary `Z >= 0`.
///
/// Evaluates `mc^2 [(1 + (Z/c)^2 / (n_r + gamma)^2)^(-1/2) - 1]` with
/// `gamma = sqrt(kappa^2 - (Z/c)^2)` in a cancellation-free form.
pub fn point_nucleus_binding<T: Real>(mass: T, c: T, z: T, kappa: i32, n_r: u32) -> Result<T> {
    if kappa == 0 {
        return Err(DiracError::InvalidParams("kappa must be nonzero".into()));
    }
    if kappa > 0 && n_r == 0 {
        return Err(DiracError::InvalidRadialNumber { kappa, n_r });
    }
    let abs_kappa = T::from_count(kappa.unsigned_abs() as usize);
    let alpha_z = z / c;
    if alpha_z >= abs_kappa {
        return Err(DiracError::Supercritical {
            z: z.to_f64_lossy(),
            limit: (c * abs_kappa).to_f64_lossy(),
        });
    }
    let gamma = ((abs_kappa - alpha_z) * (abs_kappa + alpha_z)).sqrt();
    let denom = T::from_count(n_r as usize) + gamma;
    let u = alpha_z * alpha_z / (denom * denom);
    let root = (T::one() + u).sqrt();
    Ok(-mass * c * c * u / (root * (T::one() + root)))
}

pub fn reference_binding<T: Real>(
    params: &OperatorParams<T>,
    n_r: u32,
) -> Result<ReferenceLevel<T>> {
    let binding =
        point_nucleus_binding(params.mass(), params.c(), params.z(), params.kappa(), n_r)?;
    Ok(ReferenceLevel {
        kappa: params.kappa(),
        n_r,
        binding,
    })
}

/// Lowest `count` levels of the `kappa` series, most bound first.
pub fn reference_spectrum<T: Real>(
    params: &OperatorParams<T>,
    count: usize,
) -> Result<Vec<ReferenceLevel<T>>> {
    if count == 0 {
        return Err(DiracError::InvalidCount(
            "reference spectrum needs at least one level".into(),
        ));
    }
    let first = u32::from(params.kappa() > 0);
    (0..count)
        .map(|i| reference_binding(params, first + i as u32))
        .collect()
}

/// The only accumulation point of the discrete spectrum, `mc^2`.
pub fn accumulation_point<T: Real>(params: &OperatorParams<T>) -> T {
    params.rest_energy()
}
