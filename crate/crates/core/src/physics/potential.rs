use serde::{Deserialize, Serialize};

use super::params::OperatorParams;
use crate::error::{DiracError, Result};
use crate::scalar::Real;

/// Nuclear potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PotentialModel<T> {
    /// `V(x) = -Z/x`.
    Point { charge: T },
    /// Uniformly charged sphere of radius `radius`:
    /// `V(x) = -(Z/2R)(3 - x^2/R^2)` inside, `-Z/x` outside.
    ExtendedUniform { charge: T, radius: T },
}

/// Sign selecting `w+ = mc^2 + V` or `w- = -mc^2 + V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl<T: Real> PotentialModel<T> {
    pub fn point(charge: T) -> Self {
        Self::Point { charge }
    }

    pub fn extended(charge: T, radius: T) -> Result<Self> {
        if !(radius > T::zero() && radius.is_finite()) {
            return Err(DiracError::InvalidParams(format!(
                "nuclear radius must be positive, got {radius}"
            )));
        }
        Ok(Self::ExtendedUniform { charge, radius })
    }

    pub fn charge(&self) -> T {
        match *self {
            Self::Point { charge } | Self::ExtendedUniform { charge, .. } => charge,
        }
    }

    pub fn value(&self, x: T) -> Result<T> {
        match *self {
            Self::Point { charge } => {
                if !(x > T::zero()) {
                    return Err(DiracError::Singularity(x.to_f64_lossy()));
                }
                Ok(-charge / x)
            }
            Self::ExtendedUniform { charge, radius } => {
                if x < T::zero() {
                    return Err(DiracError::Singularity(x.to_f64_lossy()));
                }
                if x < radius {
                    let s = x / radius;
                    Ok(-charge / (T::lit(2.0) * radius) * (T::lit(3.0) - s * s))
                } else {
                    Ok(-charge / x)
                }
            }
        }
    }

    /// `V'(x)`.
    pub fn derivative(&self, x: T) -> Result<T> {
        match *self {
            Self::Point { charge } => {
                if !(x > T::zero()) {
                    return Err(DiracError::Singularity(x.to_f64_lossy()));
                }
                Ok(charge / (x * x))
            }
            Self::ExtendedUniform { charge, radius } => {
                if x < T::zero() {
                    return Err(DiracError::Singularity(x.to_f64_lossy()));
                }
                if x < radius {
                    Ok(charge * x / (radius * radius * radius))
                } else {
                    Ok(charge / (x * x))
                }
            }
        }
    }
}

/// `w+(x) = mc^2 + V(x)` or `w-(x) = -mc^2 + V(x)`.
pub fn potential_w<T: Real>(
    params: &OperatorParams<T>,
    model: &PotentialModel<T>,
    branch: Branch,
    x: T,
) -> Result<T> {
    let v = model.value(x)?;
    Ok(match branch {
        Branch::Plus => params.rest_energy() + v,
        Branch::Minus => -params.rest_energy() + v,
    })
}
