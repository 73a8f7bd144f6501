//! Scalar abstraction: every numerical routine in the crate is generic
//! over an IEEE float type through [`Real`].

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar the library is generic over.
///
/// `f64` is the default type parameter on all public types; `f32` is
/// supported for quick low-precision sweeps.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + 'static {}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub fn cst<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal must be representable in the scalar type")
}
