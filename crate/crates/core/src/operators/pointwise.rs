//! Pointwise evaluation of the closed-form kernels by quadrature.

use num_complex::Complex;

use super::boundary::{BoundarySample, BoundaryVectorField, SupportHint, FAST_DECAY};
use crate::config::ProblemConfig;
use crate::error::{Error, Result};
use crate::quadrature::{End, Feature, PVQuadratureScheme};
use crate::scalar::{Scalar, Vec2};

/// `k / (1 + k^2)`, the weight of every coupling term.
#[inline]
pub fn coupling<T: Scalar>(k: T) -> T {
    k / (T::one() + k * k)
}

/// `(i lambda - T_k)^{-1} f` at `x`: a convolution term plus a boundary
/// coupling term carrying the interface condition.
pub fn resolvent<T: Scalar>(
    lambda: T,
    f: &BoundaryVectorField<T>,
    x: T,
    cfg: &ProblemConfig<T>,
    scheme: &PVQuadratureScheme<T>,
) -> Result<Vec2<Complex<T>>> {
    if lambda == T::zero() || !lambda.is_finite() {
        return Err(Error::DomainError("resolvent needs a nonzero real lambda".into()));
    }
    let k = cfg.k;
    let sl = lambda.sgn();
    let i = Complex::new(T::zero(), T::one());
    let re = |v: T| Complex::new(v, T::zero());

    let conv = |y: T| {
        let [f0, f1] = f.eval(y);
        let e = (-(lambda * (x - y)).abs()).exp();
        let s = (lambda * (x - y)).sgn();
        Vec2::new(
            (-i * f0 + re(s * f1)) * e,
            (re(-s * f0) - i * f1) * e,
        )
    };
    let plan = f
        .plan(scheme, T::lit(FAST_DECAY))
        .point(x, Feature::Smooth)
        .point(T::zero(), Feature::Smooth);
    let first = plan.integrate(&conv)?.value * (sl * T::half());

    let coupling_density = |y: T| {
        let [f0, f1] = f.eval(y);
        let e = (-(lambda * y).abs()).exp();
        (-i * f0 - re((lambda * y).sgn() * f1)) * e
    };
    let j = plan.integrate(&coupling_density)?.value;
    let pref = re(k) / (Complex::new(T::one(), -k * sl) * T::two()) * (-(lambda * x).abs()).exp();
    let second = Vec2::new(pref * i * j, pref * (lambda * x).sgn() * j);
    Ok(first + second)
}

/// `P_t = (1 + t^2 T_k^2)^{-1}` applied to `f` at `x`.
pub fn apply_pt<T: Scalar>(
    t: T,
    f: &BoundaryVectorField<T>,
    x: T,
    cfg: &ProblemConfig<T>,
    scheme: &PVQuadratureScheme<T>,
) -> Result<Vec2<T>> {
    check_height(t)?;
    let k = cfg.k;
    let kap = coupling(k);
    let sx = x.sgn();
    let g = |y: T| {
        let [f0, f1] = f.eval(y);
        let sy = y.sgn();
        let e = (-(x - y).abs() / t).exp();
        let c = (-(x.abs() + y.abs()) / t).exp() * kap;
        Vec2::new(
            e * f0 + c * (-k * f0 + sy * f1),
            e * f1 + c * sx * (f0 + k * sy * f1),
        ) * (T::half() / t)
    };
    let plan = f
        .plan(scheme, T::lit(FAST_DECAY))
        .point(x, Feature::Smooth)
        .point(T::zero(), Feature::Smooth);
    Ok(plan.integrate(&g)?.value)
}

/// `Q_t = t T_k (1 + t^2 T_k^2)^{-1}` applied to `f` at `x`.
pub fn apply_qt<T: Scalar>(
    t: T,
    f: &BoundaryVectorField<T>,
    x: T,
    cfg: &ProblemConfig<T>,
    scheme: &PVQuadratureScheme<T>,
) -> Result<Vec2<T>> {
    check_height(t)?;
    let k = cfg.k;
    let kap = coupling(k);
    let sx = x.sgn();
    let g = |y: T| {
        let [f0, f1] = f.eval(y);
        let sy = y.sgn();
        let e = (x - y).sgn() * (-(x - y).abs() / t).exp();
        let c = (-(x.abs() + y.abs()) / t).exp() * kap;
        Vec2::new(
            -e * f1 - c * (f0 + k * sy * f1),
            e * f0 - c * sx * (k * f0 - sy * f1),
        ) * (T::half() / t)
    };
    let plan = f
        .plan(scheme, T::lit(FAST_DECAY))
        .point(x, Feature::Smooth)
        .point(T::zero(), Feature::Smooth);
    Ok(plan.integrate(&g)?.value)
}

/// The Cauchy singular integral `E_k = sgn(T_k)` at `x != 0`.
pub fn apply_ek<T: Scalar>(
    f: &BoundaryVectorField<T>,
    x: T,
    cfg: &ProblemConfig<T>,
    scheme: &PVQuadratureScheme<T>,
) -> Result<Vec2<T>> {
    if x == T::zero() {
        return Err(Error::EvaluationOnInterface);
    }
    let k = cfg.k;
    let kap = coupling(k);
    let sx = x.sgn();
    let g = |y: T| {
        let [f0, f1] = f.eval(y);
        let sy = y.sgn();
        let d = (x - y).recip();
        let c = kap / (x.abs() + y.abs());
        Vec2::new(
            -f1 * d - c * (f0 + k * sy * f1),
            f0 * d - c * sx * (k * f0 - sy * f1),
        ) * T::FRAC_1_PI()
    };
    let plan = f
        .plan(scheme, T::one())
        .point(x, Feature::Pole)
        .point(T::zero(), Feature::Smooth);
    Ok(plan.integrate(&g)?.value)
}

/// Hardy projection `E_k^± = (I ± E_k)/2` at `x != 0`; `sign` is `+1` or `-1`.
pub fn hardy_projection<T: Scalar>(
    sign: T,
    f: &BoundaryVectorField<T>,
    x: T,
    cfg: &ProblemConfig<T>,
    scheme: &PVQuadratureScheme<T>,
) -> Result<Vec2<T>> {
    let e = apply_ek(f, x, cfg, scheme)?;
    let [f0, f1] = f.eval(x);
    Ok((Vec2::new(f0, f1) + e * sign.sgn()) * T::half())
}

/// Cauchy extension `e^{-t|T_k|} chi_+(T_k) f` at height `t > 0`.
pub fn cauchy_extension<T: Scalar>(
    t: T,
    f: &BoundaryVectorField<T>,
    x: T,
    cfg: &ProblemConfig<T>,
    scheme: &PVQuadratureScheme<T>,
) -> Result<Vec2<T>> {
    check_height(t)?;
    let kernel = cauchy_extension_kernel(t, x, cfg.k);
    let g = |y: T| {
        let [f0, f1] = f.eval(y);
        kernel(y, f0, f1)
    };
    let plan = f
        .plan(scheme, T::one())
        .point(x, Feature::Smooth)
        .point(T::zero(), Feature::Smooth);
    Ok(plan.integrate(&g)?.value)
}

/// Integrand of the Cauchy extension for data values `(f0, f1)` at `y`.
pub(crate) fn cauchy_extension_kernel<T: Scalar>(t: T, x: T, k: T) -> impl Fn(T, T, T) -> Vec2<T> {
    let kap = coupling(k);
    let sx = x.sgn();
    let c = T::FRAC_1_PI() * T::half();
    move |y: T, f0: T, f1: T| {
        let sy = y.sgn();
        let d = x - y;
        let r1 = t * t + d * d;
        let s = x.abs() + y.abs();
        let r2 = t * t + s * s;
        let a = f0 + k * sy * f1;
        let b = k * f0 - sy * f1;
        Vec2::new(
            (t * f0 - d * f1) / r1 - kap * (t * b + s * a) / r2,
            (t * f1 + d * f0) / r1 + kap * sx * (t * a - s * b) / r2,
        ) * c
    }
}

/// Double layer potential type operator
/// `K f(x) = sgn(x)/pi p.v. int f(y)/(x-y) dy - 1/pi int f(y)/(|x|+|y|) dy`.
pub fn apply_k<T: Scalar>(f: &BoundarySample<T>, x: T, scheme: &PVQuadratureScheme<T>) -> Result<T> {
    if x == T::zero() {
        return Err(Error::EvaluationOnInterface);
    }
    let sx = x.sgn();
    let g = |y: T| (sx / (x - y) - (x.abs() + y.abs()).recip()) * f.eval(y) * T::FRAC_1_PI();
    let plan = f
        .plan(scheme, T::one())
        .point(x, Feature::Pole)
        .point(T::zero(), Feature::Smooth);
    Ok(plan.integrate(&g)?.value)
}

/// `K_alpha f(x) = (2/pi) p.v. int_0^inf x^alpha y^(1-alpha) / (x^2 - y^2) f(y) dy`
/// for data on the half-line (values at negative arguments are ignored).
pub fn apply_k_alpha<T: Scalar>(
    alpha: T,
    f: &BoundarySample<T>,
    x: T,
    scheme: &PVQuadratureScheme<T>,
) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::DomainError("K_alpha is evaluated at x > 0".into()));
    }
    if !(alpha < T::two()) {
        return Err(Error::NonIntegrable((T::one() - alpha).to_f64_lossy()));
    }
    let power = T::one() - alpha + f.origin_exponent();
    let (lo, hi) = match f.support() {
        SupportHint::Compact(a, b) => {
            if b <= T::zero() {
                return Ok(T::zero());
            }
            let lo = if a > T::zero() {
                End::at(a)
            } else {
                End::singular(T::zero(), power)
            };
            (lo, End::at(b))
        }
        _ => {
            let rate = f.decay_rate().expect("non-compact") + T::one() + alpha;
            (End::singular(T::zero(), power), End::decaying(rate))
        }
    };
    let xa = x.powf(alpha);
    let g = |y: T| {
        if y <= T::zero() {
            return T::zero();
        }
        T::two() * T::FRAC_1_PI() * xa * y.powf(T::one() - alpha) / ((x - y) * (x + y)) * f.eval(y)
    };
    let plan = scheme
        .plan(lo, hi)
        .breaks(f.breakpoints())
        .point(x, Feature::Pole);
    Ok(plan.integrate(&g)?.value)
}

/// `K_alpha` is bounded on `L_p(R_+)` iff `alpha in (-1/p, 2 - 1/p)`.
pub fn check_k_alpha_bounded<T: Scalar>(alpha: T, p: T) -> Result<()> {
    let lo = -p.recip();
    let hi = T::two() - p.recip();
    if alpha > lo && alpha < hi {
        Ok(())
    } else {
        Err(Error::OutOfBoundednessRange {
            exponent: alpha.to_f64_lossy(),
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
        })
    }
}

fn check_height<T: Scalar>(t: T) -> Result<()> {
    if t > T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!("height must be positive, got {t}")))
    }
}
