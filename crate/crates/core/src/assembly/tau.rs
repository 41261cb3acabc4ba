use serde::{Deserialize, Serialize};

use crate::discretization::Mesh;
use crate::error::{DiracError, Result};
use crate::scalar::Real;

/// `tau_j = (9/35) h_{j+1} (h_{j+1} - h_j) / (h_{j+1} + h_j)`.
pub fn stability_parameter<T: Real>(h_left: T, h_right: T) -> T {
    T::lit(9.0 / 35.0) * h_right * (h_right - h_left) / (h_right + h_left)
}

/// Element-wise stabilization weights, one per element `1..=n+1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizationProfile<T> {
    values: Vec<T>,
}

impl<T: Real> StabilizationProfile<T> {
    pub fn zeros(mesh: &Mesh<T>) -> Self {
        Self {
            values: vec![T::zero(); mesh.element_count()],
        }
    }

    pub fn from_values(values: Vec<T>, mesh: &Mesh<T>) -> Result<Self> {
        let profile = Self { values };
        profile.check_mesh(mesh)?;
        Ok(profile)
    }

    /// Weight used inside element `k`.
    pub fn element(&self, k: usize) -> T {
        self.values[k - 1]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn check_mesh(&self, mesh: &Mesh<T>) -> Result<()> {
        if self.values.len() == mesh.element_count() {
            Ok(())
        } else {
            Err(DiracError::DimensionMismatch(format!(
                "profile has {} values, mesh has {} elements",
                self.values.len(),
                mesh.element_count()
            )))
        }
    }
}

/// Stabilization profile of a mesh.
///
/// Node `j` pairs the elements `I_j` and `I_{j+1}`; its weight `tau_j` is
/// applied on `I_{j+1}`. The first element has no left neighbour and gets 0.
pub fn compute_tau<T: Real>(mesh: &Mesh<T>) -> StabilizationProfile<T> {
    let h = mesh.sizes();
    let mut values = Vec::with_capacity(h.len());
    values.push(T::zero());
    values.extend(h.windows(2).map(|p| stability_parameter(p[0], p[1])));
    StabilizationProfile { values }
}
