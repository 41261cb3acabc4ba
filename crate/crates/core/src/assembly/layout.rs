use serde::{Deserialize, Serialize};

use crate::discretization::{BasisKind, HermitePart, Mesh};
use crate::error::{DiracError, Result};
use crate::scalar::Real;

/// Ordering of unknowns in an assembled system.
///
/// The vector is `(zeta, xi)` for hats and `(zeta, zeta', xi, xi')` for
/// Hermite, each part indexed by interior node `1..=n`. Boundary values are
/// eliminated. Boundary slopes are eliminated too unless `free_lower_slope`
/// is set, in which case the slope at `x_0` becomes the first slope unknown
/// of each component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DofLayout {
    kind: BasisKind,
    interior: usize,
    free_lower_slope: bool,
}

impl DofLayout {
    pub fn new(kind: BasisKind, interior: usize, free_lower_slope: bool) -> Self {
        Self {
            kind,
            interior,
            free_lower_slope: free_lower_slope && kind == BasisKind::CubicHermite,
        }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn interior(&self) -> usize {
        self.interior
    }

    pub fn free_lower_slope(&self) -> bool {
        self.free_lower_slope
    }

    /// Unknowns per spinor component.
    pub fn component_size(&self) -> usize {
        match self.kind {
            BasisKind::LinearHat => self.interior,
            BasisKind::CubicHermite => 2 * self.interior + usize::from(self.free_lower_slope),
        }
    }

    /// Total number of unknowns.
    pub fn size(&self) -> usize {
        2 * self.component_size()
    }

    /// Offset of the small component `xi`.
    pub fn g_offset(&self) -> usize {
        self.component_size()
    }

    /// Index of a nodal unknown inside one component block.
    pub fn local_index(&self, node: usize, part: HermitePart) -> Option<usize> {
        let n = self.interior;
        match (self.kind, part) {
            (_, HermitePart::Value) => (1..=n).contains(&node).then(|| node - 1),
            (BasisKind::LinearHat, HermitePart::Slope) => None,
            (BasisKind::CubicHermite, HermitePart::Slope) => {
                if self.free_lower_slope {
                    (node <= n).then_some(n + node)
                } else {
                    (1..=n).contains(&node).then(|| n + node - 1)
                }
            }
        }
    }

    /// Inverse of [`Self::local_index`].
    pub fn node_of(&self, local: usize) -> Option<(usize, HermitePart)> {
        let n = self.interior;
        if local < n {
            return Some((local + 1, HermitePart::Value));
        }
        if self.kind == BasisKind::LinearHat || local >= self.component_size() {
            return None;
        }
        let node = if self.free_lower_slope {
            local - n
        } else {
            local - n + 1
        };
        Some((node, HermitePart::Slope))
    }

    pub fn check_mesh<T: Real>(&self, mesh: &Mesh<T>) -> Result<()> {
        if mesh.interior_count() == self.interior {
            Ok(())
        } else {
            Err(DiracError::DimensionMismatch(format!(
                "layout built for {} interior nodes, mesh has {}",
                self.interior,
                mesh.interior_count()
            )))
        }
    }
}
