use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::assembly::{AssembledSystem, DofLayout};
use crate::discretization::{quadrature_for, BasisKind, HermiteInterpolant, HermitePart, Mesh};
use crate::error::{DiracError, Result};
use crate::physics::{OperatorParams, PotentialModel};
use crate::scalar::Real;

/// Spinor component selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Component {
    /// Large component `f`.
    F,
    /// Small component `g`.
    G,
}

/// Both spinor components rebuilt from a Hermite coefficient vector.
#[derive(Debug, Clone)]
pub struct HermiteField<'m, T> {
    pub f: HermiteInterpolant<'m, T>,
    pub g: HermiteInterpolant<'m, T>,
}

impl<'m, T: Real> HermiteField<'m, T> {
    /// Splits `coefficients` (ordered as `layout`) into nodal values and
    /// slopes, filling eliminated boundary unknowns with zero.
    pub fn from_coefficients(
        mesh: &'m Mesh<T>,
        layout: &DofLayout,
        coefficients: &[T],
    ) -> Result<Self> {
        if layout.kind() != BasisKind::CubicHermite {
            return Err(DiracError::RequiresHermite);
        }
        layout.check_mesh(mesh)?;
        if coefficients.len() != layout.size() {
            return Err(DiracError::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                layout.size(),
                coefficients.len()
            )));
        }
        let component = |offset: usize| -> Result<HermiteInterpolant<'m, T>> {
            let nodes = mesh.nodes().len();
            let mut values = vec![T::zero(); nodes];
            let mut slopes = vec![T::zero(); nodes];
            for node in 0..nodes {
                if let Some(i) = layout.local_index(node, HermitePart::Value) {
                    values[node] = coefficients[offset + i];
                }
                if let Some(i) = layout.local_index(node, HermitePart::Slope) {
                    slopes[node] = coefficients[offset + i];
                }
            }
            HermiteInterpolant::new(mesh, values, slopes)
        };
        Ok(Self {
            f: component(0)?,
            g: component(layout.g_offset())?,
        })
    }

    /// Field of eigenvector `coefficients` of an assembled Hermite system.
    pub fn from_system(system: &'m AssembledSystem<T>, coefficients: &[T]) -> Result<Self> {
        Self::from_coefficients(&system.mesh, &system.layout, coefficients)
    }

    pub fn component(&self, which: Component) -> &HermiteInterpolant<'m, T> {
        match which {
            Component::F => &self.f,
            Component::G => &self.g,
        }
    }
}

/// Coefficients `(p, q)` of `u'' + p u' + q u = 0` satisfied by one spinor
/// component of an eigenpair at `x`.
pub fn second_order_coefficients<T: Real>(
    params: &OperatorParams<T>,
    potential: &PotentialModel<T>,
    lambda: T,
    component: Component,
    x: T,
) -> Result<(T, T)> {
    if !(x > T::zero()) {
        return Err(DiracError::Singularity(x.to_f64_lossy()));
    }
    let mc2 = params.rest_energy();
    let c = params.c();
    let kappa = params.kappa_real();
    let v = potential.value(x)?;
    let dv = potential.derivative(x)?;
    let w_plus = mc2 + v - lambda;
    let w_minus = -mc2 + v - lambda;
    let guard =
        T::lit(1024.0) * T::epsilon() * Float::max(Float::max(Float::abs(lambda), mc2), T::one());
    let denom = match component {
        Component::F => w_minus,
        Component::G => w_plus,
    };
    if Float::abs(denom) <= guard {
        return Err(DiracError::CoefficientSingularity {
            x: x.to_f64_lossy(),
        });
    }
    let common = w_plus * w_minus / (c * c);
    Ok(match component {
        Component::F => (
            -dv / w_minus,
            common - (kappa * kappa + kappa) / (x * x) - kappa * dv / (x * w_minus),
        ),
        Component::G => (
            -dv / w_plus,
            common - (kappa * kappa - kappa) / (x * x) + kappa * dv / (x * w_plus),
        ),
    })
}

/// Discrete L2 norm of `u'' + p u' + q u` over the mesh, sampled at the
/// Gauss points of every element.
pub fn second_order_residual<T: Real>(
    field: &HermiteField<'_, T>,
    params: &OperatorParams<T>,
    potential: &PotentialModel<T>,
    lambda: T,
    component: Component,
) -> Result<T> {
    let u = field.component(component);
    let mesh = u.mesh();
    let mut total = T::zero();
    for k in 1..=mesh.element_count() {
        let rule = quadrature_for(mesh, k)?;
        for i in 0..4 {
            let s = u.eval_local(k, rule.unit_points[i]);
            if s.value.is_zero() && s.d1.is_zero() && s.d2.is_zero() {
                continue;
            }
            let (p, q) =
                second_order_coefficients(params, potential, lambda, component, rule.points[i])?;
            let r = s.d2 + p * s.d1 + q * s.value;
            total += rule.weights[i] * r * r;
        }
    }
    Ok(total.sqrt())
}

/// Pointwise residuals of the two first-order equations for trial
/// components given as `x -> (value, derivative)`.
///
/// The returned closure evaluates `(W+ f - c g' + c kappa g / x,
/// W- g + c f' + c kappa f / x)` with `W+- = w+- - lambda`.
pub fn supg_residuals<'a, T, F, G>(
    f: F,
    g: G,
    params: &'a OperatorParams<T>,
    potential: &'a PotentialModel<T>,
    lambda: T,
) -> impl Fn(T) -> Result<(T, T)> + 'a
where
    T: Real,
    F: Fn(T) -> (T, T) + 'a,
    G: Fn(T) -> (T, T) + 'a,
{
    move |x: T| {
        if !(x > T::zero()) {
            return Err(DiracError::Singularity(x.to_f64_lossy()));
        }
        let mc2 = params.rest_energy();
        let c = params.c();
        let ck = c * params.kappa_real() / x;
        let v = potential.value(x)?;
        let (fv, fd) = f(x);
        let (gv, gd) = g(x);
        Ok((
            (mc2 + v - lambda) * fv - c * gd + ck * gv,
            (-mc2 + v - lambda) * gv + c * fd + ck * fv,
        ))
    }
}

/// First-order estimates of the neighbouring nodal values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Propagated<T> {
    pub zeta_prev: T,
    pub xi_prev: T,
    pub zeta_next: T,
    pub xi_next: T,
}

/// Propagates `(zeta_j, xi_j)` at `x_j` to `x_{j-1}` and `x_{j+1}` with
/// one-sided difference quotients in the first-order system.
#[allow(clippy::too_many_arguments)]
pub fn nodal_propagation<T: Real>(
    params: &OperatorParams<T>,
    potential: &PotentialModel<T>,
    x_j: T,
    h_j: T,
    h_next: T,
    zeta: T,
    xi: T,
    lambda: T,
) -> Result<Propagated<T>> {
    if !(x_j > T::zero()) {
        return Err(DiracError::Singularity(x_j.to_f64_lossy()));
    }
    let mc2 = params.rest_energy();
    let c = params.c();
    let k = params.kappa_real() / x_j;
    let v = potential.value(x_j)?;
    Ok(Propagated {
        zeta_prev: (T::one() + h_j * k) * zeta + (h_j / c * (-mc2 + v) - h_j / c * lambda) * xi,
        xi_prev: (T::one() - h_j * k) * xi + (-h_j / c * (mc2 + v) + h_j / c * lambda) * zeta,
        zeta_next: (T::one() - h_next * k) * zeta
            + (-h_next / c * (-mc2 + v) + h_next / c * lambda) * xi,
        xi_next: (T::one() + h_next * k) * xi
            + (h_next / c * (mc2 + v) - h_next / c * lambda) * zeta,
    })
}

/// Exact `kappa = -1` ground state `f = x^s e^(-b x)`, `g = A f` of a point
/// nucleus (unnormalised), with derivatives up to second order.
#[derive(Debug, Clone, Copy)]
pub struct GroundSpinor<T> {
    pub lambda: T,
    s: T,
    b: T,
    ratio: T,
}

impl<T: Real> GroundSpinor<T> {
    pub fn new(params: &OperatorParams<T>) -> Result<Self> {
        if params.kappa() != -1 {
            return Err(DiracError::InvalidParams(
                "closed-form ground spinor needs kappa = -1".into(),
            ));
        }
        let (m, c, z) = (params.mass(), params.c(), params.z());
        let az = z / c;
        let s = ((T::one() - az) * (T::one() + az)).sqrt();
        Ok(Self {
            lambda: m * c * c * s,
            s,
            b: m * z,
            ratio: c * (s - T::one()) / z,
        })
    }

    /// `(f, f', f'')` at `x > 0`.
    pub fn f(&self, x: T) -> (T, T, T) {
        let v = x.powf(self.s) * (-self.b * x).exp();
        let l = self.s / x - self.b;
        (v, l * v, (l * l - self.s / (x * x)) * v)
    }

    pub fn g(&self, x: T) -> (T, T, T) {
        let (v, d, dd) = self.f(x);
        (self.ratio * v, self.ratio * d, self.ratio * dd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hydrogen() -> (OperatorParams<f64>, PotentialModel<f64>) {
        (
            OperatorParams::new(1.0, -1).unwrap(),
            PotentialModel::point(1.0),
        )
    }

    #[test]
    fn exact_ground_state_solves_both_systems() {
        let (params, pot) = hydrogen();
        let ground = GroundSpinor::new(&params).unwrap();
        let res = supg_residuals(
            |x| {
                let (v, d, _) = ground.f(x);
                (v, d)
            },
            |x| {
                let (v, d, _) = ground.g(x);
                (v, d)
            },
            &params,
            &pot,
            ground.lambda,
        );
        for x in [0.01, 0.7, 3.0, 11.0] {
            let (r1, r2) = res(x).unwrap();
            let scale = ground.f(x).0 * params.rest_energy();
            assert!(
                r1.abs() < 1e-12 * scale && r2.abs() < 1e-12 * scale,
                "{x}: {r1} {r2}"
            );
            for comp in [Component::F, Component::G] {
                let (p, q) =
                    second_order_coefficients(&params, &pot, ground.lambda, comp, x).unwrap();
                let (u, du, ddu) = match comp {
                    Component::F => ground.f(x),
                    Component::G => ground.g(x),
                };
                let r = ddu + p * du + q * u;
                assert!(
                    r.abs() < 1e-8 * (ddu.abs() + (p * du).abs() + (q * u).abs()),
                    "{comp:?} {x}: {r}"
                );
            }
        }
    }

    #[test]
    fn zero_field_has_zero_residuals() {
        let (params, pot) = hydrogen();
        let mesh = Mesh::<f64>::exponential(1e-3, 20.0, 10, 4.0).unwrap();
        let layout = DofLayout::new(BasisKind::CubicHermite, 10, false);
        let field = HermiteField::from_coefficients(&mesh, &layout, &[0.0; 40]).unwrap();
        for comp in [Component::F, Component::G] {
            assert_eq!(
                second_order_residual(&field, &params, &pot, 100.0, comp).unwrap(),
                0.0
            );
        }
        let res = supg_residuals(|_| (0.0, 0.0), |_| (0.0, 0.0), &params, &pot, 3.0);
        assert_eq!(res(1.0).unwrap(), (0.0, 0.0));
        assert!(matches!(res(0.0), Err(DiracError::Singularity(_))));
    }

    #[test]
    fn field_requires_hermite_layout() {
        let mesh = Mesh::<f64>::uniform(1.0, 2.0, 3).unwrap();
        let layout = DofLayout::new(BasisKind::LinearHat, 3, false);
        assert_eq!(
            HermiteField::from_coefficients(&mesh, &layout, &[0.0; 6]).unwrap_err(),
            DiracError::RequiresHermite
        );
    }

    #[test]
    fn singular_coefficient_reported() {
        let (params, pot) = hydrogen();
        // w+(x) - lambda vanishes where V(x) equals the binding
        let lambda = params.rest_energy() - 0.5;
        assert!(matches!(
            second_order_coefficients(&params, &pot, lambda, Component::G, 2.0),
            Err(DiracError::CoefficientSingularity { .. })
        ));
        assert!(second_order_coefficients(&params, &pot, lambda, Component::F, 2.0).is_ok());
    }

    #[test]
    fn propagation_zero_step_is_identity() {
        let (params, pot) = hydrogen();
        let p = nodal_propagation(&params, &pot, 0.3, 0.0, 0.0, 1.5, -0.2, 7.0).unwrap();
        assert_eq!(
            p,
            Propagated {
                zeta_prev: 1.5,
                xi_prev: -0.2,
                zeta_next: 1.5,
                xi_next: -0.2
            }
        );
    }

    #[test]
    fn propagation_free_particle_at_rest_energy() {
        // V = 0, lambda = mc^2: xi is frozen, zeta moves by -+2mc h xi
        let params = OperatorParams::<f64>::with_constants(1.0, 10.0, 1.0, -1).unwrap();
        let free = PotentialModel::point(0.0);
        let (h, x) = (1e-3, 1e12);
        let p = nodal_propagation(&params, &free, x, h, h, 2.0, 0.5, 100.0).unwrap();
        assert!((p.xi_prev - 0.5).abs() < 1e-12 && (p.xi_next - 0.5).abs() < 1e-12);
        assert!((p.zeta_prev - (2.0 - 2.0 * 10.0 * h * 0.5)).abs() < 1e-12);
        assert!((p.zeta_next - (2.0 + 2.0 * 10.0 * h * 0.5)).abs() < 1e-12);
    }

    #[test]
    fn propagated_slopes_are_first_order() {
        let (params, pot) = hydrogen();
        let ground = GroundSpinor::new(&params).unwrap();
        let x = 1.3;
        let err = |h: f64| {
            let p = nodal_propagation(
                &params,
                &pot,
                x,
                h,
                h,
                ground.f(x).0,
                ground.g(x).0,
                ground.lambda,
            )
            .unwrap();
            ((p.zeta_next - ground.f(x + h).0).abs() + (p.zeta_prev - ground.f(x - h).0).abs()) / h
        };
        let ratio = err(1e-3) / err(5e-4);
        assert!((ratio - 2.0).abs() < 0.1, "slope error ratio {ratio}");
    }
}
