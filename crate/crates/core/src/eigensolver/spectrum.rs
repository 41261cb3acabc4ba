use nalgebra::DVector;
use num_traits::Float;

use crate::assembly::{DofLayout, Scheme};
use crate::error::{DiracError, Result};
use crate::physics::OperatorParams;
use crate::scalar::Real;

/// Computed generalized eigenvalues of one pencil.
#[derive(Debug, Clone)]
pub struct Spectrum<T: Real> {
    /// `None` for pencils that did not come from an assembled system.
    pub scheme: Option<Scheme>,
    pub rest_energy: T,
    /// Every finite eigenvalue (real part), ascending.
    pub raw: Vec<T>,
    /// `lambda - mc^2` for eigenvalues inside `(-mc^2, mc^2)`, ascending.
    pub bindings: Vec<T>,
    /// Largest `|Im lambda|` among the bound-state window.
    pub max_imag: T,
    /// Eigenvectors aligned with `bindings`, normalised to unit rhs-norm.
    pub eigenvectors: Option<Vec<DVector<T>>>,
    pub layout: Option<DofLayout>,
}

impl<T: Real> Spectrum<T> {
    /// Builds a spectrum from plain eigenvalues, keeping the window
    /// `(-mc^2, mc^2)` as bound states.
    pub fn from_eigenvalues(rest_energy: T, mut raw: Vec<T>) -> Self {
        raw.retain(|v| v.is_finite());
        raw.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
        let bindings = raw
            .iter()
            .filter(|&&v| v > -rest_energy && v < rest_energy)
            .map(|&v| v - rest_energy)
            .collect();
        Self {
            scheme: None,
            rest_energy,
            raw,
            bindings,
            max_imag: T::zero(),
            eigenvectors: None,
            layout: None,
        }
    }

    pub fn lambda(&self, index: usize) -> T {
        self.bindings[index] + self.rest_energy
    }

    pub fn eigenvector(&self, index: usize) -> Result<&DVector<T>> {
        self.eigenvectors
            .as_ref()
            .and_then(|v| v.get(index))
            .ok_or(DiracError::MissingEigenvectors)
    }
}

/// The `count` lowest bound-state bindings.
pub fn bound_states<T: Real>(
    spectrum: &Spectrum<T>,
    params: &OperatorParams<T>,
    count: usize,
) -> Result<Vec<T>> {
    let mc2 = params.rest_energy();
    let mut bound: Vec<T> = if Float::abs(spectrum.rest_energy - mc2) <= T::epsilon() * mc2 {
        spectrum.bindings.clone()
    } else {
        spectrum
            .raw
            .iter()
            .filter(|&&v| v > -mc2 && v < mc2)
            .map(|&v| v - mc2)
            .collect()
    };
    if bound.len() < count {
        return Err(DiracError::InsufficientLevels {
            found: bound.len(),
            requested: count,
        });
    }
    bound.truncate(count);
    Ok(bound)
}
