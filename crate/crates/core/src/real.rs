//! Scalar abstraction shared by the numerical modules.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar the special-function and channel code is generic over.
///
/// Implemented for `f32` and `f64`. Accuracy targets quoted in the docs refer
/// to `f64`; `f32` evaluations use tolerances scaled by [`Real::tolerance_floor`].
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static {
    /// Converts an `f64` literal. Panics only if the type cannot represent it at all.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable in scalar type")
    }

    /// Smallest absolute tolerance worth asking of an integrator in this precision.
    #[inline]
    fn tolerance_floor() -> Self {
        Self::epsilon() * Self::lit(100.0)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
