use serde::{Deserialize, Serialize};

use super::basis::{hermite_shapes, Shape};
use super::mesh::Mesh;
use crate::error::{DiracError, Result};
use crate::scalar::Real;

/// C1 piecewise-cubic function given by nodal values and slopes on a mesh.
///
/// Both vectors cover all nodes `0..=n+1`, boundary included.
#[derive(Debug, Clone)]
pub struct HermiteInterpolant<'m, T> {
    mesh: &'m Mesh<T>,
    values: Vec<T>,
    slopes: Vec<T>,
}

impl<'m, T: Real> HermiteInterpolant<'m, T> {
    pub fn new(mesh: &'m Mesh<T>, values: Vec<T>, slopes: Vec<T>) -> Result<Self> {
        let expected = mesh.nodes().len();
        if values.len() != expected || slopes.len() != expected {
            return Err(DiracError::DimensionMismatch(format!(
                "expected {expected} nodal values and slopes, got {} and {}",
                values.len(),
                slopes.len()
            )));
        }
        Ok(Self {
            mesh,
            values,
            slopes,
        })
    }

    /// Interpolates `f` with derivative `df` at every node.
    pub fn from_function(mesh: &'m Mesh<T>, f: impl Fn(T) -> T, df: impl Fn(T) -> T) -> Self {
        let values = mesh.nodes().iter().map(|&x| f(x)).collect();
        let slopes = mesh.nodes().iter().map(|&x| df(x)).collect();
        Self {
            mesh,
            values,
            slopes,
        }
    }

    pub fn mesh(&self) -> &'m Mesh<T> {
        self.mesh
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn slopes(&self) -> &[T] {
        &self.slopes
    }

    /// Evaluates on element `k` at reference coordinate `t`.
    pub fn eval_local(&self, k: usize, t: T) -> Shape<T> {
        let h = self.mesh.h(k);
        let coeffs = [
            self.values[k - 1],
            self.slopes[k - 1],
            self.values[k],
            self.slopes[k],
        ];
        hermite_shapes(t, h).iter().zip(coeffs).fold(
            Shape {
                value: T::zero(),
                d1: T::zero(),
                d2: T::zero(),
            },
            |acc, (s, c)| Shape {
                value: acc.value + c * s.value,
                d1: acc.d1 + c * s.d1,
                d2: acc.d2 + c * s.d2,
            },
        )
    }

    pub fn eval(&self, x: T) -> Result<Shape<T>> {
        let k = self.mesh.locate(x)?;
        let (left, _) = self.mesh.element(k);
        Ok(self.eval_local(k, (x - left) / self.mesh.h(k)))
    }
}

/// Result of a Hermite interpolation refinement study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolationStudy<T> {
    /// `(h, max-norm error)` for each requested size.
    pub errors: Vec<(T, T)>,
    /// Least-squares slope of `log error` against `log h`; `None` when some
    /// error is zero (the function lies in the cubic space).
    pub order: Option<T>,
}

const SAMPLES_PER_ELEMENT: usize = 16;

/// Interpolates `f` on uniform meshes of `[a, b]` with the given element
/// sizes and fits the convergence order of the max-norm error.
///
/// Sizes are rounded to the nearest whole number of elements (at least two).
pub fn hermite_interpolation_error_order<T: Real>(
    f: impl Fn(T) -> T,
    df: impl Fn(T) -> T,
    a: T,
    b: T,
    mesh_sizes: &[T],
) -> Result<InterpolationStudy<T>> {
    if mesh_sizes.len() < 3 {
        return Err(DiracError::DegenerateFit(mesh_sizes.len()));
    }
    let mut errors = Vec::with_capacity(mesh_sizes.len());
    for &h in mesh_sizes {
        if !(h > T::zero()) {
            return Err(DiracError::InvalidCount(format!(
                "mesh size must be positive, got {h}"
            )));
        }
        let elements = ((b - a) / h).round().to_usize().unwrap_or(0).max(2);
        let mesh = Mesh::uniform(a, b, elements - 1)?;
        let interp = HermiteInterpolant::from_function(&mesh, &f, &df);
        let mut worst = T::zero();
        for k in 1..=mesh.element_count() {
            let (lo, _) = mesh.element(k);
            let hk = mesh.h(k);
            for s in 0..=SAMPLES_PER_ELEMENT {
                let t = T::from_count(s) / T::from_count(SAMPLES_PER_ELEMENT);
                let approx = interp.eval_local(k, t).value;
                worst = worst.max((approx - f(lo + t * hk)).abs());
            }
        }
        errors.push((mesh.h(1), worst));
    }

    let tiny = T::epsilon() * T::lit(16.0);
    let order = if errors.iter().any(|&(_, e)| e <= tiny) {
        None
    } else {
        Some(log_log_slope(&errors))
    };
    Ok(InterpolationStudy { errors, order })
}

fn log_log_slope<T: Real>(points: &[(T, T)]) -> T {
    let count = T::from_count(points.len());
    let (sx, sy) = points
        .iter()
        .fold((T::zero(), T::zero()), |(sx, sy), &(h, e)| {
            (sx + h.ln(), sy + e.ln())
        });
    let (mx, my) = (sx / count, sy / count);
    let (num, den) = points
        .iter()
        .fold((T::zero(), T::zero()), |(n, d), &(h, e)| {
            let dx = h.ln() - mx;
            (n + dx * (e.ln() - my), d + dx * dx)
        });
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn halvings() -> Vec<f64> {
        (0..5).map(|i| PI / 8.0 / 2f64.powi(i)).collect()
    }

    #[test]
    fn constants_and_cubics_are_exact() {
        let sizes = halvings();
        let c = hermite_interpolation_error_order(|_| 2.5, |_| 0.0, 0.0, PI, &sizes).unwrap();
        assert!(c.errors.iter().all(|&(_, e)| e < 1e-14));
        assert_eq!(c.order, None);

        let cubic = hermite_interpolation_error_order(
            |x: f64| x * x * x - 2.0 * x + 1.0,
            |x| 3.0 * x * x - 2.0,
            0.0,
            PI,
            &sizes,
        )
        .unwrap();
        assert!(cubic.errors.iter().all(|&(_, e)| e < 1e-12));
    }

    #[test]
    fn sine_converges_at_fourth_order() {
        let study =
            hermite_interpolation_error_order(f64::sin, f64::cos, 0.0, PI, &halvings()).unwrap();
        let order = study.order.unwrap();
        assert!(order >= 3.8, "observed order {order}");
    }

    #[test]
    fn needs_three_sizes() {
        assert!(matches!(
            hermite_interpolation_error_order(f64::sin, f64::cos, 0.0, 1.0, &[0.1, 0.05]),
            Err(DiracError::DegenerateFit(2))
        ));
    }

    #[test]
    fn interpolant_reproduces_nodes() {
        let mesh = Mesh::<f64>::exponential(0.1, 3.0, 7, 2.0).unwrap();
        let interp = HermiteInterpolant::from_function(&mesh, f64::exp, f64::exp);
        for &x in mesh.nodes() {
            let s = interp.eval(x).unwrap();
            assert!((s.value - x.exp()).abs() < 1e-13 * x.exp());
            assert!((s.d1 - x.exp()).abs() < 1e-12 * x.exp());
        }
    }
}
