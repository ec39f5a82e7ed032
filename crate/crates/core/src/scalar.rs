//! Scalar abstraction shared by every numerical routine.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Real field the numerics run over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `e(z) = exp(2πiz)`.
pub fn e2pi<T: Real>(z: Complex<T>) -> Complex<T> {
    let two_pi = T::PI() + T::PI();
    (Complex::new(-two_pi * z.im, two_pi * z.re)).exp()
}

pub fn two_pi_i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::PI() + T::PI())
}

pub fn cr<T: Real>(x: f64) -> Complex<T> {
    Complex::new(T::lit(x), T::zero())
}
