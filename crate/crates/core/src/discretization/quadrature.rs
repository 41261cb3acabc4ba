use super::mesh::Mesh;
use crate::error::Result;
use crate::scalar::Real;

/// Abscissae of the 4-point Gauss-Legendre rule on `[-1, 1]`.
pub const GAUSS4_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];

/// Weights matching [`GAUSS4_NODES`].
pub const GAUSS4_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_85,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_85,
];

/// Four-point Gauss-Legendre rule mapped onto one element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureRule<T> {
    pub points: [T; 4],
    pub weights: [T; 4],
    /// Reference coordinates `t` in `[0, 1]` of the points.
    pub unit_points: [T; 4],
}

impl<T: Real> QuadratureRule<T> {
    /// Rule on `[lo, hi]`.
    pub fn on_interval(lo: T, hi: T) -> Self {
        let half = T::lit(0.5);
        let h = hi - lo;
        let mut points = [T::zero(); 4];
        let mut weights = [T::zero(); 4];
        let mut unit_points = [T::zero(); 4];
        for i in 0..4 {
            let t = half * (T::one() + T::lit(GAUSS4_NODES[i]));
            unit_points[i] = t;
            points[i] = lo + h * t;
            weights[i] = half * h * T::lit(GAUSS4_WEIGHTS[i]);
        }
        Self {
            points,
            weights,
            unit_points,
        }
    }

    pub fn integrate(&self, mut f: impl FnMut(T) -> T) -> T {
        self.points
            .iter()
            .zip(self.weights.iter())
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
    }
}

/// The rule on element `k` (`1..=n+1`).
pub fn quadrature_for<T: Real>(mesh: &Mesh<T>, k: usize) -> Result<QuadratureRule<T>> {
    mesh.check_element(k)?;
    let (lo, hi) = mesh.element(k);
    Ok(QuadratureRule::on_interval(lo, hi))
}
