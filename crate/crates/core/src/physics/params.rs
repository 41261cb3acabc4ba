use serde::{Deserialize, Serialize};

use crate::error::{DiracError, Result};
use crate::scalar::Real;

/// Speed of light in atomic units (CODATA 2018), the default for `c`.
pub const DEFAULT_LIGHT_SPEED: f64 = 137.035_999_084;

/// Constants and quantum numbers of the radial Dirac operator.
///
/// Invariants checked on construction: `kappa != 0`, `m > 0`, `c > 0`,
/// `Z >= 1` and `Z < c |kappa|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorParams<T> {
    mass: T,
    light_speed: T,
    charge: T,
    kappa: i32,
}

impl<T: Real> OperatorParams<T> {
    /// Unit mass and the default speed of light.
    pub fn new(charge: T, kappa: i32) -> Result<Self> {
        Self::with_constants(T::one(), T::lit(DEFAULT_LIGHT_SPEED), charge, kappa)
    }

    pub fn with_constants(mass: T, light_speed: T, charge: T, kappa: i32) -> Result<Self> {
        let params = Self {
            mass,
            light_speed,
            charge,
            kappa,
        };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<()> {
        if self.kappa == 0 {
            return Err(DiracError::InvalidParams("kappa must be nonzero".into()));
        }
        if !(self.mass > T::zero() && self.mass.is_finite()) {
            return Err(DiracError::InvalidParams(format!(
                "mass must be positive, got {}",
                self.mass
            )));
        }
        if !(self.light_speed > T::zero() && self.light_speed.is_finite()) {
            return Err(DiracError::InvalidParams(format!(
                "speed of light must be positive, got {}",
                self.light_speed
            )));
        }
        if !(self.charge >= T::one() && self.charge.is_finite()) {
            return Err(DiracError::InvalidParams(format!(
                "nuclear charge must be at least 1, got {}",
                self.charge
            )));
        }
        let limit = self.light_speed * T::from_count(self.kappa.unsigned_abs() as usize);
        if self.charge >= limit {
            return Err(DiracError::Supercritical {
                z: self.charge.to_f64_lossy(),
                limit: limit.to_f64_lossy(),
            });
        }
        Ok(())
    }

    pub fn with_light_speed(self, light_speed: T) -> Result<Self> {
        Self::with_constants(self.mass, light_speed, self.charge, self.kappa)
    }

    pub fn with_kappa(self, kappa: i32) -> Result<Self> {
        Self::with_constants(self.mass, self.light_speed, self.charge, kappa)
    }

    /// Same constants with `-kappa`.
    pub fn flipped(self) -> Self {
        Self {
            kappa: -self.kappa,
            ..self
        }
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn c(&self) -> T {
        self.light_speed
    }

    pub fn z(&self) -> T {
        self.charge
    }

    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    pub fn kappa_real(&self) -> T {
        T::from_i32(self.kappa).expect("kappa fits any float")
    }

    /// `m c^2`.
    pub fn rest_energy(&self) -> T {
        self.mass * self.light_speed * self.light_speed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invariant_violations() {
        assert!(matches!(
            OperatorParams::<f64>::new(1.0, 0),
            Err(DiracError::InvalidParams(_))
        ));
        assert!(matches!(
            OperatorParams::<f64>::new(0.5, -1),
            Err(DiracError::InvalidParams(_))
        ));
        assert!(matches!(
            OperatorParams::<f64>::new(138.0, -1),
            Err(DiracError::Supercritical { .. })
        ));
        assert!(OperatorParams::<f64>::new(138.0, 2).is_ok());
        assert!(OperatorParams::<f64>::with_constants(0.0, 1.0, 1.0, 1).is_err());
        assert!(OperatorParams::<f64>::with_constants(1.0, -3.0, 1.0, 1).is_err());
    }

    #[test]
    fn flipping_preserves_constants() {
        let p = OperatorParams::<f64>::new(12.0, -2).unwrap();
        let q = p.flipped();
        assert_eq!(q.kappa(), 2);
        assert_eq!(q.rest_energy(), p.rest_energy());
        assert!(q.validate().is_ok());
    }
}
