use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Fourier symbol of the log-line convolution
/// `(2/pi) p.v. e^{gamma s} / (e^{2 s} - 1) * g`, under `g^(xi) = int g e^{-i xi s}`:
/// `m(xi) = i (1 + z) / (1 - z)`, `z = e^{pi (xi + i gamma)}`,
/// equivalently `-cot(pi (gamma - i xi) / 2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultiplierSymbol<T> {
    pub gamma: T,
}

impl<T: Scalar> MultiplierSymbol<T> {
    pub fn new(gamma: T) -> Result<Self> {
        if !(gamma > T::zero() && gamma < T::two()) {
            return Err(Error::OutOfBoundednessRange {
                exponent: gamma.to_f64_lossy(),
                lo: 0.0,
                hi: 2.0,
            });
        }
        Ok(Self { gamma })
    }

    #[inline]
    pub fn eval(&self, xi: T) -> Complex<T> {
        m_gamma(self.gamma, xi)
    }
}

/// Symbol of `K~_gamma`.
pub fn multiplier_of_ktilde<T: Scalar>(gamma: T) -> Result<MultiplierSymbol<T>> {
    MultiplierSymbol::new(gamma)
}

/// `i (1 + z) / (1 - z)` with `z = e^{pi (xi + i gamma)}`, evaluated through
/// `1/z` when `|z| > 1` to avoid overflow.
pub fn m_gamma<T: Scalar>(gamma: T, xi: T) -> Complex<T> {
    let i = Complex::new(T::zero(), T::one());
    let one = Complex::new(T::one(), T::zero());
    let pi = T::PI();
    if xi <= T::zero() {
        let z = Complex::from_polar((pi * xi).exp(), pi * gamma);
        i * (one + z) / (one - z)
    } else {
        let w = Complex::from_polar((-pi * xi).exp(), -pi * gamma);
        i * (w + one) / (w - one)
    }
}

/// Symbol of the half-line Hilbert part `(1/pi) p.v. int_0^inf g(y)/(a - y) dy`
/// on the log-line with sampling weight `c`: `-cot(pi (c - i w))`.
pub fn hilbert_half_symbol<T: Scalar>(c: T, w: T) -> Complex<T> {
    m_gamma(T::two() * c, T::two() * w)
}

/// Symbol of `(1/pi) int_0^inf g(y)/(a + y) dy` with weight `c`:
/// `1 / sin(pi (c - i w))`.
pub fn stieltjes_symbol<T: Scalar>(c: T, w: T) -> Complex<T> {
    let pi = T::PI();
    let two_i = Complex::new(T::zero(), T::two());
    let one = Complex::new(T::one(), T::zero());
    // theta = pi (c - i w); 1/sin(theta) = 2i e^{i theta} / (e^{2 i theta} - 1)
    if w <= T::zero() {
        let e = Complex::from_polar((pi * w).exp(), pi * c);
        let z = e * e;
        two_i * e / (z - one)
    } else {
        let e = Complex::from_polar((-pi * w).exp(), -pi * c);
        let z = e * e;
        // divide numerator and denominator by e^{2 i theta}
        two_i * e / (one - z)
    }
}
