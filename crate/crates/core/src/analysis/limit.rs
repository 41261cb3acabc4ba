use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{DiracError, Result};
use crate::scalar::Real;

/// Positive root of the two-node limit pencil. The root is purely imaginary
/// when `(a^2 - b^2) / (rho^2 - d^2)` is negative; the payload is then its
/// magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LimitRoot<T> {
    Real(T),
    Imaginary(T),
}

impl<T: Real> LimitRoot<T> {
    /// `|lambda_1 - c^2| / c^2`.
    pub fn relative_gap(&self, c: T) -> T {
        let c2 = c * c;
        match *self {
            Self::Real(v) => Float::abs(v - c2) / c2,
            Self::Imaginary(v) => Float::hypot(c2, v) / c2,
        }
    }
}

/// Coefficients of the limit system on an element pair with `m = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitElementQuantities<T> {
    pub h_j: T,
    pub h_next: T,
    pub tau: T,
    pub c: T,
    /// `-9/70`.
    pub rho: T,
    /// `(h_{j+1} + h_j) / (h_{j+1} - h_j)`.
    pub nabla: T,
    pub a: T,
    pub b: T,
    pub d: T,
    pub lambda1: LimitRoot<T>,
}

impl<T: Real> LimitElementQuantities<T> {
    pub fn new(h_j: T, h_next: T, tau: T, c: T) -> Result<Self> {
        if !(h_j > T::zero() && h_next > T::zero() && c > T::zero()) {
            return Err(DiracError::InvalidParams(format!(
                "element sizes and c must be positive (h_j = {h_j}, h_j+1 = {h_next}, c = {c})"
            )));
        }
        if h_next == h_j {
            return Err(DiracError::DegeneratePencil("equal element sizes"));
        }
        let rho = T::lit(-9.0 / 70.0);
        let nabla = (h_next + h_j) / (h_next - h_j);
        let six_fifths = T::lit(1.2);
        let c2 = c * c;
        let c3 = c2 * c;
        let a = -(six_fifths * c / (h_next * h_j) + c3 / T::lit(2.0) * nabla) * tau + rho * c2;
        let b = six_fifths * c2 / h_next * tau - T::lit(9.0 / 70.0) * c3 * h_next;
        let d = -six_fifths / h_next * tau;
        let den = (rho - d) * (rho + d);
        if den == T::zero() {
            return Err(DiracError::DegeneratePencil("rho^2 = d^2"));
        }
        let q = (a - b) * (a + b) / den;
        let lambda1 = if q >= T::zero() {
            LimitRoot::Real(q.sqrt())
        } else {
            LimitRoot::Imaginary((-q).sqrt())
        };
        Ok(Self {
            h_j,
            h_next,
            tau,
            c,
            rho,
            nabla,
            a,
            b,
            d,
            lambda1,
        })
    }

    /// Residual of the large-`c` balance `nabla^2 tau^2 / 4 - (81/4900) h_{j+1}^2`.
    pub fn balance_residual(&self) -> T {
        tau_balance_residual(self.h_j, self.h_next, self.tau)
    }
}

/// Positive root of the limit pencil for one element pair.
pub fn tau_limit_lambda<T: Real>(h_j: T, h_next: T, tau: T, c: T) -> Result<LimitRoot<T>> {
    LimitElementQuantities::new(h_j, h_next, tau, c).map(|q| q.lambda1)
}

/// `nabla^2 tau^2 / 4 - (81/4900) h_{j+1}^2`; zero for the optimal `tau`.
pub fn tau_balance_residual<T: Real>(h_j: T, h_next: T, tau: T) -> T {
    let nabla = (h_next + h_j) / (h_next - h_j);
    let half = nabla * tau / T::lit(2.0);
    let target = T::lit(9.0 / 70.0) * h_next;
    (half - target) * (half + target)
}
