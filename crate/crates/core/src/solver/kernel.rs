//! The closed-form Poisson kernel, its axis restriction, the residue
//! formula behind it and the quadrant composition.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::config::k_of_alpha;
use crate::error::{Error, Result};
use crate::operators::BoundarySample;
use crate::quadrature::{End, Feature, PVQuadratureScheme};
use crate::scalar::Scalar;

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha > -T::two() && alpha < T::one() {
        Ok(())
    } else {
        Err(Error::DomainError(format!("alpha = {alpha} outside (-2, 1)")))
    }
}

/// `(|x| + i t)^(1 + alpha)` with the argument in `(0, pi/2]`.
fn corner_power<T: Scalar>(t: T, x: T, alpha: T) -> Complex<T> {
    let r = x.hypot(t);
    let theta = t.atan2(x.abs());
    Complex::from_polar(r.powf(T::one() + alpha), theta * (T::one() + alpha))
}

/// Signed harmonic measure density `P_alpha(t, x; y)`.
pub fn poisson_kernel<T: Scalar>(alpha: T, t: T, x: T, y: T) -> Result<T> {
    check_alpha(alpha)?;
    if !(t > T::zero()) {
        return Err(Error::DomainError("poisson_kernel needs t > 0".into()));
    }
    if y == T::zero() || !y.is_finite() || !x.is_finite() {
        return Err(Error::DomainError("poisson_kernel needs finite y != 0".into()));
    }
    Ok(poisson_kernel_unchecked(alpha, t, x, y))
}

#[inline]
pub(crate) fn poisson_kernel_unchecked<T: Scalar>(alpha: T, t: T, x: T, y: T) -> T {
    let w = corner_power(t, x, alpha);
    let wc = Complex::new(x.abs(), -t);
    let factor = Complex::new(y * y, T::zero()) - wc * wc;
    let im = (w * factor).im;
    let num = T::two() * x * t * y + y.abs().powf(-alpha) * im;
    let den = (t * t + (x - y) * (x - y)) * (t * t + (x + y) * (x + y));
    num / den * T::FRAC_1_PI()
}

/// `P_alpha(t, 0; y) = cos(pi alpha/2)/pi * t^(1+alpha) |y|^-alpha / (t^2 + y^2)`.
pub fn poisson_kernel_axis<T: Scalar>(alpha: T, t: T, y: T) -> Result<T> {
    check_alpha(alpha)?;
    if !(t > T::zero()) || y == T::zero() {
        return Err(Error::DomainError("axis kernel needs t > 0 and y != 0".into()));
    }
    let c = (T::PI() * alpha * T::half()).cos() * T::FRAC_1_PI();
    Ok(c * t.powf(T::one() + alpha) * y.abs().powf(-alpha) / (t * t + y * y))
}

/// Closed form of
/// `I(t, x, z) = p.v. int_0^inf (gamma t + beta (y - x)) / (t^2 + (y - x)^2) * y^(1+alpha) / (y^2 - z^2) dy`.
///
/// Near `alpha = 0` the closed form is `0/0`; there the value is
/// Richardson-extrapolated from symmetric offsets in `alpha`.
pub fn residue_i<T: Scalar>(alpha: T, beta: T, gamma: T, t: T, x: T, z: T) -> Result<T> {
    check_alpha(alpha)?;
    if !(t > T::zero() && z > T::zero()) {
        return Err(Error::DomainError("residue formula needs t, z > 0".into()));
    }
    let delta = T::lit(1e-3);
    if alpha.abs() < delta {
        let avg = |d: T| {
            (residue_closed(alpha + d, beta, gamma, t, x, z)
                + residue_closed(alpha - d, beta, gamma, t, x, z))
                * T::half()
        };
        let four = T::lit(4.0);
        return Ok((avg(delta) * four - avg(delta * T::two())) / T::lit(3.0));
    }
    Ok(residue_closed(alpha, beta, gamma, t, x, z))
}

fn residue_closed<T: Scalar>(alpha: T, beta: T, gamma: T, t: T, x: T, z: T) -> T {
    let k = k_of_alpha(alpha);
    let one = T::one();
    let a = (k * k - one) * T::half() * (gamma * t - beta * (x - z)) / (t * t + (x - z) * (x - z));
    let b = (k * k + one) * T::half() * (gamma * t - beta * (x + z)) / (t * t + (x + z) * (x + z));
    // (x + i t)^(1+alpha) with arg(x + i t) in (0, pi).
    let w = Complex::new(x, t);
    let wp = Complex::from_polar(w.norm().powf(one + alpha), w.arg() * (one + alpha));
    let omk = Complex::new(one, -k);
    let c = (omk * omk * Complex::new(beta, -gamma) * wp / (w * w - Complex::new(z * z, T::zero()))).re
        * z.powf(-alpha);
    (a - b - c) * T::PI() / (T::two() * k) * z.powf(alpha)
}

/// The same integral by principal-value quadrature.
pub fn residue_i_quadrature<T: Scalar>(
    alpha: T,
    beta: T,
    gamma: T,
    t: T,
    x: T,
    z: T,
    scheme: &PVQuadratureScheme<T>,
) -> Result<T> {
    check_alpha(alpha)?;
    let f = |y: T| {
        let d = y - x;
        (gamma * t + beta * d) / (t * t + d * d) * y.powf(T::one() + alpha) / ((y - z) * (y + z))
    };
    let mut plan = scheme
        .plan(End::singular(T::zero(), T::one() + alpha), End::decaying(T::two() - alpha))
        .point(z, Feature::Pole);
    if x > T::zero() && x != z {
        plan = plan.point(x, Feature::Smooth);
    }
    Ok(plan.integrate(&f)?.value)
}

/// `(lhs, rhs)` of the quadrant identity
/// `(1/pi) int_0^inf s^(2+alpha) / ((4x^2t^2 + (x^2-t^2+s^2)^2)(s^2+y^2)) ds
///  = -1/(2 cos(pi alpha/2)) |y|^(1+alpha) / (4x^2t^2 + (x^2-t^2-y^2)^2)
///    + 1/(4xt) Re((1 - ik)(t + ix)^(1+alpha) / ((t + ix)^2 + y^2))`.
pub fn quadrant_integral_identity<T: Scalar>(
    alpha: T,
    t: T,
    x: T,
    y: T,
    scheme: &PVQuadratureScheme<T>,
) -> Result<(T, T)> {
    check_alpha(alpha)?;
    if !(t > T::zero() && x > T::zero() && y > T::zero()) {
        return Err(Error::DomainError("quadrant identity needs t, x, y > 0".into()));
    }
    let four = T::lit(4.0);
    let c = four * x * x * t * t;
    let e = x * x - t * t;
    let f = |s: T| {
        let q = e + s * s;
        s.powf(T::two() + alpha) / ((c + q * q) * (s * s + y * y))
    };
    let mut plan = scheme
        .plan(End::singular(T::zero(), T::two() + alpha), End::decaying(T::lit(4.0) - alpha))
        .point(y, Feature::Smooth);
    if e < T::zero() {
        plan = plan.point((-e).sqrt(), Feature::Smooth);
    }
    let lhs = plan.integrate(&f)?.value * T::FRAC_1_PI();

    let k = k_of_alpha(alpha);
    let cos = (T::PI() * alpha * T::half()).cos();
    let q = e - y * y;
    let first = -T::half() / cos * y.powf(T::one() + alpha) / (c + q * q);
    let w = Complex::new(t, x);
    let wp = Complex::from_polar(w.norm().powf(T::one() + alpha), w.arg() * (T::one() + alpha));
    let ratio = Complex::new(T::one(), -k) * wp / (w * w + Complex::new(y * y, T::zero()));
    let rhs = first + ratio.re / (four * x * t);
    Ok((lhs, rhs))
}

/// `U(t, x)` in a quadrant from the boundary data on that half-line and
/// the axis values `U(s, 0)`, by the Laplace Poisson integral of the
/// quadrant. `axis_exponents = (e0, d)` declares `U(s, 0) ~ s^e0` as
/// `s -> 0` and `~ s^-d` as `s -> inf`.
pub fn quadrant_poisson<T, F>(
    u: &BoundarySample<T>,
    axis_values: F,
    axis_exponents: (T, T),
    t: T,
    x: T,
    scheme: &PVQuadratureScheme<T>,
) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T + Sync,
{
    if !(t > T::zero()) || x == T::zero() {
        return Err(Error::DomainError("quadrant Poisson needs t > 0, x != 0".into()));
    }
    let side = x.sgn();
    let x = x.abs();
    let four = T::lit(4.0);
    let c = four * x * x * t * t;
    let e = x * x - t * t;

    let data = |y: T| {
        let q = e - y * y;
        four * x * t * y / (c + q * q) * u.eval(side * y)
    };
    let mut breaks: Vec<T> = u
        .breakpoints()
        .into_iter()
        .map(|b| b * side)
        .filter(|&b| b > T::zero())
        .collect();
    breaks.push(x.hypot(t));
    if e > T::zero() {
        breaks.push(e.sqrt());
    }
    let hi = match u.support() {
        crate::operators::SupportHint::Compact(a, b) => {
            let top = if side > T::zero() { b } else { -a };
            if top <= T::zero() {
                None
            } else {
                Some(End::at(top))
            }
        }
        _ => Some(End::decaying(u.decay_rate().expect("non-compact") + T::lit(3.0))),
    };
    let first = match hi {
        None => T::zero(),
        Some(hi) => scheme
            .plan(End::singular(T::zero(), u.origin_exponent()), hi)
            .breaks(breaks)
            .integrate(&data)?
            .value,
    };

    let axis = |s: T| {
        let q = e + s * s;
        four * x * t * s / (c + q * q) * axis_values(s)
    };
    let mut plan = scheme
        .plan(
            End::singular(T::zero(), T::one() + axis_exponents.0),
            End::decaying(T::lit(3.0) + axis_exponents.1),
        )
        .point(x.hypot(t), Feature::Smooth);
    if e < T::zero() {
        plan = plan.point((-e).sqrt(), Feature::Smooth);
    }
    let second = plan.integrate(&axis)?.value;
    Ok((first + second) * T::FRAC_1_PI())
}

/// One sample of the harmonic measure density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelRow {
    pub alpha: f64,
    pub y: f64,
    pub value: f64,
}

/// `P_alpha(t, x; y)` over `alphas x ys` (rows ordered by alpha, then y).
/// Nodes with `y = 0` are skipped.
pub fn harmonic_measure_table(alphas: &[f64], t: f64, x: f64, ys: &[f64]) -> Result<Vec<KernelRow>> {
    let mut rows = Vec::with_capacity(alphas.len() * ys.len());
    for &alpha in alphas {
        for &y in ys {
            if y == 0.0 {
                continue;
            }
            let value = if x == 0.0 {
                poisson_kernel_axis(alpha, t, y)?
            } else {
                poisson_kernel(alpha, t, x, y)?
            };
            rows.push(KernelRow { alpha, y, value });
        }
    }
    Ok(rows)
}
