//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All kernels, quadratures and operators are written against [`Scalar`],
//! which is implemented for `f32` and `f64`. The verification suite and the
//! command-line tool work in `f64`; see the aliases at the crate root.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::FftNum;

/// Real floating-point type usable by the solvers.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + FftNum + Sum + Default + Display + Debug + Send + Sync + 'static
{
    /// Convert an `f64` literal. Values are always representable up to rounding.
    fn lit(v: f64) -> Self;

    fn to_f64_lossy(self) -> f64;

    fn half() -> Self {
        Self::lit(0.5)
    }

    fn two() -> Self {
        Self::lit(2.0)
    }

    /// `sgn(x)` with the convention `sgn(0) = 0`. Callers never evaluate at 0
    /// on purpose; the value is only reachable through round-off.
    fn sgn(self) -> Self {
        if self > Self::zero() {
            Self::one()
        } else if self < Self::zero() {
            -Self::one()
        } else {
            Self::zero()
        }
    }
}

impl Scalar for f64 {
    #[inline]
    fn lit(v: f64) -> Self {
        v
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    #[inline]
    fn lit(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

/// Values that can be accumulated by the quadrature engines: reals, complex
/// numbers and fixed-size vectors of either.
pub trait QuadValue<T: Scalar>:
    Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self>
{
    fn zero() -> Self;
    /// Magnitude used for error estimates (max-norm over components).
    fn magnitude(&self) -> T;
    fn is_finite_value(&self) -> bool;
}

impl<T: Scalar> QuadValue<T> for T {
    #[inline]
    fn zero() -> Self {
        T::zero()
    }
    #[inline]
    fn magnitude(&self) -> T {
        self.abs()
    }
    #[inline]
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl<T: Scalar> QuadValue<T> for Complex<T> {
    #[inline]
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    #[inline]
    fn magnitude(&self) -> T {
        self.norm()
    }
    #[inline]
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl<T: Scalar> QuadValue<T> for Vec2<T> {
    #[inline]
    fn zero() -> Self {
        Vec2([T::zero(), T::zero()])
    }
    #[inline]
    fn magnitude(&self) -> T {
        self.0[0].abs().max(self.0[1].abs())
    }
    #[inline]
    fn is_finite_value(&self) -> bool {
        self.0[0].is_finite() && self.0[1].is_finite()
    }
}

impl<T: Scalar> QuadValue<T> for Vec2<Complex<T>> {
    #[inline]
    fn zero() -> Self {
        Vec2([Complex::new(T::zero(), T::zero()); 2])
    }
    #[inline]
    fn magnitude(&self) -> T {
        self.0[0].norm().max(self.0[1].norm())
    }
    #[inline]
    fn is_finite_value(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Two-component value `[f0, f1]`, identified with `f0 e0 + f1 e1`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec2<V>(pub [V; 2]);

impl<V> Vec2<V> {
    pub fn new(v0: V, v1: V) -> Self {
        Vec2([v0, v1])
    }
}

impl<V: Copy> Vec2<V> {
    pub fn v0(&self) -> V {
        self.0[0]
    }
    pub fn v1(&self) -> V {
        self.0[1]
    }
}

impl<V: Add<Output = V> + Copy> Add for Vec2<V> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Vec2([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1]])
    }
}

impl<V: Sub<Output = V> + Copy> Sub for Vec2<V> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Vec2([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1]])
    }
}

impl<V: Mul<T, Output = V> + Copy, T: Scalar> Mul<T> for Vec2<V> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: T) -> Self {
        Vec2([self.0[0] * rhs, self.0[1] * rhs])
    }
}

/// Convenience for `T::lit`.
#[inline]
pub fn lit<T: Scalar>(v: f64) -> T {
    T::lit(v)
}
