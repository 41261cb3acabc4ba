use serde::{Deserialize, Serialize};

use super::mesh::Mesh;
use crate::error::{DiracError, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisKind {
    LinearHat,
    CubicHermite,
}

impl BasisKind {
    /// Unknowns attached to one interior node.
    pub fn dofs_per_node(self) -> usize {
        match self {
            Self::LinearHat => 1,
            Self::CubicHermite => 2,
        }
    }
}

/// Which of the two Hermite functions attached to a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HermitePart {
    /// `phi_{j,1}`: 1 at `x_j`, zero slope there.
    Value,
    /// `phi_{j,2}`: 0 at `x_j`, unit slope there.
    Slope,
}

/// Value and first two derivatives of a local shape function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shape<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
}

/// Local shape functions of one element in physical units.
///
/// `t` is the reference coordinate in `[0, 1]`, `h` the element size.
/// Order: left value, left slope, right value, right slope.
pub fn hermite_shapes<T: Real>(t: T, h: T) -> [Shape<T>; 4] {
    let one = T::one();
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let four = T::lit(4.0);
    let six = T::lit(6.0);
    let t2 = t * t;
    let t3 = t2 * t;
    [
        Shape {
            value: one - three * t2 + two * t3,
            d1: (six * t2 - six * t) / h,
            d2: (T::lit(12.0) * t - six) / (h * h),
        },
        Shape {
            value: h * (t - two * t2 + t3),
            d1: one - four * t + three * t2,
            d2: (six * t - four) / h,
        },
        Shape {
            value: three * t2 - two * t3,
            d1: (six * t - six * t2) / h,
            d2: (six - T::lit(12.0) * t) / (h * h),
        },
        Shape {
            value: h * (t3 - t2),
            d1: three * t2 - two * t,
            d2: (six * t - two) / h,
        },
    ]
}

/// Local hat functions of one element: left node, right node.
pub fn hat_shapes<T: Real>(t: T, h: T) -> [Shape<T>; 2] {
    [
        Shape {
            value: T::one() - t,
            d1: -T::one() / h,
            d2: T::zero(),
        },
        Shape {
            value: t,
            d1: T::one() / h,
            d2: T::zero(),
        },
    ]
}

/// A basis family over a borrowed mesh.
#[derive(Debug, Clone, Copy)]
pub struct BasisFamily<'m, T> {
    kind: BasisKind,
    mesh: &'m Mesh<T>,
}

impl<'m, T: Real> BasisFamily<'m, T> {
    pub fn new(kind: BasisKind, mesh: &'m Mesh<T>) -> Self {
        Self { kind, mesh }
    }

    pub fn linear(mesh: &'m Mesh<T>) -> Self {
        Self::new(BasisKind::LinearHat, mesh)
    }

    pub fn hermite(mesh: &'m Mesh<T>) -> Self {
        Self::new(BasisKind::CubicHermite, mesh)
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn mesh(&self) -> &'m Mesh<T> {
        self.mesh
    }

    /// `n` for hats, `2n` for Hermite.
    pub fn dof_count(&self) -> usize {
        self.kind.dofs_per_node() * self.mesh.interior_count()
    }

    fn check_node(&self, j: usize) -> Result<()> {
        let n = self.mesh.interior_count();
        if (1..=n).contains(&j) {
            Ok(())
        } else {
            Err(DiracError::IndexOutOfRange {
                what: "basis node",
                index: j,
                lo: 1,
                hi: n,
            })
        }
    }

    /// Element holding `x` and the reference coordinate inside it.
    fn element_coordinate(&self, x: T) -> Result<(usize, T, T)> {
        let k = self.mesh.locate(x)?;
        let (left, _) = self.mesh.element(k);
        let h = self.mesh.h(k);
        Ok((k, (x - left) / h, h))
    }

    /// Hat function `phi_j` (order 0) or its derivative (order 1).
    pub fn eval_hat(&self, j: usize, x: T, order: u8) -> Result<T> {
        if self.kind != BasisKind::LinearHat {
            return Err(DiracError::BasisMismatch("eval_hat needs a linear basis"));
        }
        if order > 1 {
            return Err(DiracError::UnsupportedOrder(order));
        }
        self.check_node(j)?;
        let (k, t, h) = self.element_coordinate(x)?;
        let local = if k == j {
            1
        } else if k == j + 1 {
            0
        } else {
            return Ok(T::zero());
        };
        let shape = hat_shapes(t, h)[local];
        Ok(if order == 0 { shape.value } else { shape.d1 })
    }

    /// Hermite function `phi_{j,1}` or `phi_{j,2}` (order 0) or its derivative (order 1).
    pub fn eval_hermite(&self, j: usize, part: HermitePart, x: T, order: u8) -> Result<T> {
        if self.kind != BasisKind::CubicHermite {
            return Err(DiracError::BasisMismatch(
                "eval_hermite needs a cubic Hermite basis",
            ));
        }
        if order > 1 {
            return Err(DiracError::UnsupportedOrder(order));
        }
        self.check_node(j)?;
        let (k, t, h) = self.element_coordinate(x)?;
        let offset = match part {
            HermitePart::Value => 0,
            HermitePart::Slope => 1,
        };
        let local = if k == j {
            2 + offset
        } else if k == j + 1 {
            offset
        } else {
            return Ok(T::zero());
        };
        let shape = hermite_shapes(t, h)[local];
        Ok(if order == 0 { shape.value } else { shape.d1 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize) -> Mesh<f64> {
        Mesh::<f64>::uniform(0.0, (n + 1) as f64, n).unwrap()
    }

    #[test]
    fn hat_nodal_values_and_slope() {
        let mesh = Mesh::<f64>::exponential(1e-5, 50.0, 10, 6.0).unwrap();
        let basis = BasisFamily::linear(&mesh);
        let j = 4;
        assert_eq!(basis.eval_hat(j, mesh.node(j), 0).unwrap(), 1.0);
        assert_eq!(basis.eval_hat(j, mesh.node(j - 1), 0).unwrap(), 0.0);
        let mid = 0.5 * (mesh.node(j - 1) + mesh.node(j));
        let slope = basis.eval_hat(j, mid, 1).unwrap();
        assert!((slope - 1.0 / mesh.h(j)).abs() < 1e-12 * slope);
        assert!(matches!(
            basis.eval_hat(j, mid, 2),
            Err(DiracError::UnsupportedOrder(2))
        ));
    }

    #[test]
    fn hermite_nodal_properties() {
        let mesh = Mesh::<f64>::exponential(1e-5, 50.0, 10, 6.0).unwrap();
        let basis = BasisFamily::hermite(&mesh);
        let j = 6;
        let xj = mesh.node(j);
        assert!((basis.eval_hermite(j, HermitePart::Value, xj, 0).unwrap() - 1.0).abs() < 1e-14);
        assert!(
            basis
                .eval_hermite(j, HermitePart::Value, xj, 1)
                .unwrap()
                .abs()
                < 1e-12
        );
        assert!(
            basis
                .eval_hermite(j, HermitePart::Slope, xj, 0)
                .unwrap()
                .abs()
                < 1e-14
        );
        assert!((basis.eval_hermite(j, HermitePart::Slope, xj, 1).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hermite_value_at_right_midpoint_is_half() {
        let mesh = uniform(5);
        let basis = BasisFamily::hermite(&mesh);
        let x = mesh.node(2) + 0.5;
        let v = basis.eval_hermite(2, HermitePart::Value, x, 0).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_outside_support() {
        let mesh = uniform(8);
        let hat = BasisFamily::linear(&mesh);
        let herm = BasisFamily::hermite(&mesh);
        for x in [0.5, 1.9, 6.1, 8.5] {
            assert_eq!(hat.eval_hat(4, x, 0).unwrap(), 0.0);
            assert_eq!(herm.eval_hermite(4, HermitePart::Slope, x, 1).unwrap(), 0.0);
        }
    }

    #[test]
    fn wrong_family_and_index_rejected() {
        let mesh = uniform(3);
        let hat = BasisFamily::linear(&mesh);
        assert!(matches!(
            hat.eval_hermite(1, HermitePart::Value, 1.0, 0),
            Err(DiracError::BasisMismatch(_))
        ));
        assert!(matches!(
            hat.eval_hat(4, 1.0, 0),
            Err(DiracError::IndexOutOfRange { .. })
        ));
        assert_eq!(BasisFamily::hermite(&mesh).dof_count(), 6);
    }

    #[test]
    fn second_derivatives_match_finite_differences() {
        let h: f64 = 0.37;
        let t = 0.31;
        let dt = 1e-6;
        let lo = hermite_shapes(t - dt, h);
        let hi = hermite_shapes(t + dt, h);
        for (i, s) in hermite_shapes(t, h).iter().enumerate() {
            let fd = (hi[i].d1 - lo[i].d1) / (2.0 * dt * h);
            assert!((fd - s.d2).abs() < 1e-6 * (1.0 + s.d2.abs()));
        }
    }
}
