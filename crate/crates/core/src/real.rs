use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Scalar type of the whole library: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from a literal; panics only for non-finite inputs
    /// that the target type cannot represent, which never happens for
    /// `f32`/`f64`.
    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).unwrap()
    }

    fn of_i64(x: i64) -> Self {
        // Large i64 round to the nearest representable float.
        Self::of(x as f64)
    }

    fn of_usize(x: usize) -> Self {
        Self::of(x as f64)
    }
}

impl Real for f32 {}
impl Real for f64 {}
