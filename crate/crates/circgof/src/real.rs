use num_traits::{Float, FloatConst};
use std::fmt::Debug;

/// Scalar type the circular math is written against. Implemented for `f32`
/// and `f64`; everything numerically demanding in the test suite runs at
/// `f64`.
pub trait Real: Float + FloatConst + Debug + Send + Sync + 'static {
    /// Lossy conversion from `f64`, for literals and RNG output.
    fn of(x: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Real for f64 {
    #[inline]
    fn of(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
}
