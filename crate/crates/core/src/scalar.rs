//! Scalar abstraction for the geometry kernel and the quadtree.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point coordinate type: `f32` or `f64`.
///
/// Every predicate in [`crate::geom`] compares against [`Scalar::geom_eps`], which is
/// tuned to the precision of the concrete type.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance for incidence and orientation tests.
    fn geom_eps() -> Self;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    fn geom_eps() -> f32 {
        1e-5
    }
}

impl Scalar for f64 {
    fn geom_eps() -> f64 {
        1e-9
    }
}
