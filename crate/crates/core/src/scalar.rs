use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point type the recoupling kernels can be evaluated in.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lossless-enough conversion from a small integer.
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable in scalar")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
