//! Scalar abstraction shared by the operator algebra.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point type the operator algebra is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `i^k` for `k` taken mod 4, exact.
pub fn i_pow<T: Real>(k: u8) -> Complex<T> {
    match k & 3 {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

/// Multiply by `i^k` without rounding (component swap and negation only).
pub fn rotate_i<T: Real>(c: Complex<T>, k: u8) -> Complex<T> {
    match k & 3 {
        0 => c,
        1 => Complex::new(-c.im, c.re),
        2 => Complex::new(-c.re, -c.im),
        _ => Complex::new(c.im, -c.re),
    }
}
