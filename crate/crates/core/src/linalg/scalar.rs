use num_complex::Complex64;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Field of matrix entries: real or complex double precision.
pub trait Scalar:
    Copy
    + Send
    + Sync
    + Debug
    + PartialEq
    + Default
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    /// Builds a value from real and imaginary parts; real scalars drop `im`.
    fn from_parts(re: f64, im: f64) -> Self;
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn abs(self) -> f64;
    fn abs_sq(self) -> f64;
    fn scale(self, s: f64) -> Self;
    fn is_finite(self) -> bool;
    fn to_complex(self) -> Complex64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }
    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn abs_sq(self) -> f64 {
        self * self
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn from_parts(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn abs_sq(self) -> f64 {
        self.norm_sqr()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

/// Conjugate-linear inner product `⟨x, y⟩ = Σ conj(x_i) y_i`.
pub fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().zip(y).fold(T::zero(), |acc, (&a, &b)| acc + a.conj() * b)
}

pub fn norm2<T: Scalar>(x: &[T]) -> f64 {
    x.iter().map(|v| v.abs_sq()).sum::<f64>().sqrt()
}

/// `y += a * x`
pub fn axpy<T: Scalar>(a: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Unit-modulus phase of `x`, or one at zero.
pub fn phase<T: Scalar>(x: T) -> T {
    let r = x.abs();
    if r == 0.0 {
        T::one()
    } else {
        x.scale(1.0 / r)
    }
}
