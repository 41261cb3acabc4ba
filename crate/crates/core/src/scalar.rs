//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real floating-point scalar (`f32` or `f64`).
///
/// Everything up to and including assembly only needs this bound. The dense
/// eigensolver additionally needs [`LinalgReal`].
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("every f64 literal is representable")
    }

    /// Converts a count or index into `Self`.
    #[inline]
    fn from_count(value: usize) -> Self {
        Self::from_usize(value).expect("counts are representable")
    }

    /// Lossy conversion used for diagnostics and error payloads.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Scalar usable with the nalgebra dense decompositions.
///
/// Both `num_traits::Float` and `nalgebra::RealField` provide methods such as
/// `abs` and `sqrt`; code bounded by this trait calls them fully qualified.
pub trait LinalgReal: Real + nalgebra::RealField {}

impl<T: Real + nalgebra::RealField> LinalgReal for T {}
