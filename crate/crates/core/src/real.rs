//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps};

/// Floating-point scalar the analysis is generic over (`f32` or `f64`).
///
/// Tolerances throughout the crate are written as `f64` literals tuned for
/// double precision. [`Real::tol`] maps such a literal onto the scalar type,
/// widening it to a few hundred ulps for single precision where the requested
/// tolerance would be unattainable.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssignOps
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant. Panics only on non-representable input,
    /// which cannot happen for the finite literals used in this crate.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Tolerance `t` expressed in this scalar type.
    fn tol(t: f64) -> Self;

    fn to_f64_lossy(self) -> f64;
}

impl Real for f64 {
    #[inline]
    fn tol(t: f64) -> Self {
        t
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Real for f32 {
    #[inline]
    fn tol(t: f64) -> Self {
        (t as f32).max(f32::EPSILON * 256.0)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}
