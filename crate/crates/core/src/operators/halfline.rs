//! Half-line operators realized on the log-line: `K_a` and the closed-form
//! inverses of `I -+ k K_0`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boundary::{BoundarySample, SmoothnessHint, SupportHint};
use super::pointwise::check_k_alpha_bounded;
use super::symbols::m_gamma;
use crate::config::{alpha_in_window, conjugate};
use crate::error::{Error, Result};
use crate::quadrature::logline::{check_window, log_line_multiplier_apply, LogGrid, LogGridFunction};
use crate::scalar::Scalar;

/// Resolution of log-line discretizations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogGridSettings {
    /// Target spacing in `s = ln x`.
    pub step: f64,
    /// Relative size of the output allowed at the window ends.
    pub tolerance: f64,
    /// Fixed number of grid points (overrides `step`).
    pub points: Option<usize>,
}

impl Default for LogGridSettings {
    fn default() -> Self {
        Self {
            step: 0.02,
            tolerance: 1e-13,
            points: None,
        }
    }
}

/// Half-line data profile: `f ~ x^lo_exponent` near 0, `f ~ x^-decay` at
/// infinity (`None`: faster than any power), and the scales `[x_lo, x_hi]`
/// where the data lives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfLineProfile<T> {
    pub lo_exponent: T,
    pub decay: Option<T>,
    pub x_lo: T,
    pub x_hi: T,
}

impl<T: Scalar> HalfLineProfile<T> {
    /// Profile of half-line data (a sample already restricted to `(0, inf)`).
    pub fn of(f: &BoundarySample<T>) -> Self {
        let x_hi = f.extent().max(T::lit(1e-3));
        let mut x_lo = x_hi * T::lit(1e-2);
        if let SupportHint::Compact(a, _) = f.support() {
            if a > T::zero() {
                x_lo = a;
            }
        }
        if let SmoothnessHint::PiecewiseSmooth(b) = f.smoothness() {
            for &y in b {
                if y > T::zero() {
                    x_lo = x_lo.min(y);
                }
            }
        }
        let decay = match f.support() {
            SupportHint::AlgebraicDecay(r) => Some(r),
            _ => None,
        };
        Self {
            lo_exponent: f.origin_exponent(),
            decay,
            x_lo,
            x_hi,
        }
    }
}

const MAX_DECAY: f64 = 4.0;
const MAX_REFINEMENTS: usize = 3;

/// `identity * f + sum_i coef_i K_{a_i} f` on the half-line, via one FFT
/// pair on a log-grid whose weight balances the decay at both window ends.
pub fn half_line_combination<T, F>(
    f: F,
    profile: &HalfLineProfile<T>,
    identity: T,
    terms: &[(T, T)],
    settings: &LogGridSettings,
) -> Result<LogGridFunction<T>>
where
    T: Scalar,
    F: Fn(T) -> T + Sync,
{
    // Data with slowly decaying spectra in `ln x` (compact bumps) ring at
    // the default step; the ringing shows up as a window leak. Refine then.
    let mut settings = settings.clone();
    let mut refinements = 0;
    let (grid, out) = loop {
        let (grid, input) = sample_for(&f, profile, terms, &settings)?;
        let c = grid.weight;
        let symbol = |xi: T| {
            let mut m = Complex::new(identity, T::zero());
            for &(coef, a) in terms {
                m = m + m_gamma(a + c, xi) * coef;
            }
            m
        };
        let out = log_line_multiplier_apply(&input, grid.h, symbol)?;
        match check_window(&out) {
            Err(Error::WindowLeak(_)) if settings.points.is_none() && refinements < MAX_REFINEMENTS => {
                settings.step *= 0.5;
                refinements += 1;
            }
            r => break r.map(|_| (grid, out))?,
        }
    };
    let (b0, binf) = output_exponents(profile, terms);
    Ok(LogGridFunction::new(
        grid,
        out.into_iter().map(|z| z.re).collect(),
        b0,
        -binf,
    ))
}

/// Exponents `(b0, binf)` of the output: `~x^b0` at 0, `~x^-binf` at infinity.
fn output_exponents<T: Scalar>(profile: &HalfLineProfile<T>, terms: &[(T, T)]) -> (T, T) {
    let mut b0 = profile.lo_exponent;
    let mut binf = profile.decay.unwrap_or(T::lit(MAX_DECAY)).min(T::lit(MAX_DECAY));
    for &(_, a) in terms {
        b0 = b0.min(a);
        binf = binf.min(T::two() - a);
    }
    (b0, binf)
}

/// Weighted samples of `f` on a window sized for the given operator terms.
fn sample_for<T, F>(
    f: &F,
    profile: &HalfLineProfile<T>,
    terms: &[(T, T)],
    settings: &LogGridSettings,
) -> Result<(LogGrid<T>, Vec<Complex<T>>)>
where
    T: Scalar,
    F: Fn(T) -> T + Sync,
{
    let (b0, binf) = output_exponents(profile, terms);
    let c = (binf - b0) * T::half();
    let rate = (binf + b0) * T::half();
    if !(rate > T::zero()) {
        let a = terms.iter().map(|t| t.1).fold(T::zero(), T::max);
        return Err(Error::OutOfBoundednessRange {
            exponent: a.to_f64_lossy(),
            lo: 0.0,
            hi: 2.0,
        });
    }
    for &(_, a) in terms {
        let g = a + c;
        if !(g > T::zero() && g < T::two()) {
            return Err(Error::OutOfBoundednessRange {
                exponent: g.to_f64_lossy(),
                lo: 0.0,
                hi: 2.0,
            });
        }
    }
    let reach = T::lit(settings.tolerance).recip().ln() / rate;
    let cap = T::max_value().ln() * T::lit(0.9);
    let s_lo = (profile.x_lo.ln() - reach).max(-cap);
    let s_hi = (profile.x_hi.ln() + reach).min(cap);
    let n = match settings.points {
        Some(n) => n.max(16),
        None => {
            let raw = ((s_hi - s_lo) / T::lit(settings.step)).ceil().to_usize().unwrap_or(16);
            raw.max(16).next_power_of_two()
        }
    };
    let h = (s_hi - s_lo) / T::from_usize(n - 1).expect("size");
    let grid = LogGrid::new(s_lo, h, n, c);
    let input: Vec<Complex<T>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let s = grid.s(j);
            Complex::new((c * s).exp() * f(s.exp()), T::zero())
        })
        .collect();
    check_window(&input)?;
    Ok((grid, input))
}

/// `K_alpha f` on the half-line by the multiplier route.
pub fn apply_k_alpha_grid<T: Scalar>(
    alpha: T,
    f: &BoundarySample<T>,
    settings: &LogGridSettings,
) -> Result<LogGridFunction<T>> {
    let profile = HalfLineProfile::of(f);
    half_line_combination(|y| f.eval(y), &profile, T::zero(), &[(T::one(), alpha)], settings)
}

/// Which boundary operator to invert.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OpSign {
    /// `I + k K_0` (Neumann type).
    Plus,
    /// `I - k K_0` (regularity type).
    Minus,
}

/// Closed-form inverse of `I -+ k K_0` on `L_p(R_+)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfLineInverse<T> {
    pub sign: OpSign,
    pub k: T,
    pub p: T,
    /// Exponent of the `K_alpha` in the inverse, in `(-1/p, 2 - 1/p)`.
    pub alpha: T,
}

/// Distance from a threshold below which inversion is refused.
pub const INVERSION_BAND: f64 = 1e-6;

impl<T: Scalar> HalfLineInverse<T> {
    /// `(I - k K_0)^{-1} = (1+k^2)^{-1} (I + k K_alpha)` with
    /// `tan(pi alpha/2) = k`; for `I + k K_0` replace `k` by `-k`.
    pub fn new(sign: OpSign, k: T, p: T) -> Result<Self> {
        conjugate(p)?;
        let kk = match sign {
            OpSign::Minus => k,
            OpSign::Plus => -k,
        };
        // Threshold: alpha at the window end -1/p, i.e. kk = -tan(pi/(2p)).
        let threshold_kk = -(T::FRAC_PI_2() / p).tan();
        let threshold = match sign {
            OpSign::Minus => threshold_kk,
            OpSign::Plus => -threshold_kk,
        };
        let distance = (kk - threshold_kk).abs();
        if distance <= T::lit(INVERSION_BAND) {
            return Err(Error::NotInvertible {
                k: k.to_f64_lossy(),
                threshold: threshold.to_f64_lossy(),
                distance: distance.to_f64_lossy(),
            });
        }
        let alpha = alpha_in_window(kk, -p.recip()).map_err(|_| Error::NotInvertible {
            k: k.to_f64_lossy(),
            threshold: threshold.to_f64_lossy(),
            distance: distance.to_f64_lossy(),
        })?;
        check_k_alpha_bounded(alpha, p)?;
        Ok(Self { sign, k, p, alpha })
    }

    /// `(coefficient of I, [(coefficient, exponent)])` of the inverse.
    pub fn terms(&self) -> (T, [(T, T); 1]) {
        let d = (T::one() + self.k * self.k).recip();
        let kk = match self.sign {
            OpSign::Minus => self.k,
            OpSign::Plus => -self.k,
        };
        (d, [(kk * d, self.alpha)])
    }

    pub fn apply(&self, f: &BoundarySample<T>, settings: &LogGridSettings) -> Result<LogGridFunction<T>> {
        let profile = HalfLineProfile::of(f);
        let (id, terms) = self.terms();
        half_line_combination(|y| f.eval(y), &profile, id, &terms, settings)
    }
}

/// `(I -+ k K_0)^{-1} f` for data on the half-line, returned as boundary data.
pub fn invert_half_line<T: Scalar>(
    sign: OpSign,
    k: T,
    p: T,
    f: &BoundarySample<T>,
    settings: &LogGridSettings,
) -> Result<BoundarySample<T>> {
    let inv = HalfLineInverse::new(sign, k, p)?;
    let g = inv.apply(f, settings)?;
    log_grid_sample(g)
}

/// Wrap a log-grid function as half-line boundary data.
pub fn log_grid_sample<T: Scalar>(g: LogGridFunction<T>) -> Result<BoundarySample<T>> {
    let decay = -g.hi_exponent;
    let lo = g.lo_exponent.min(T::zero());
    let lo = if lo > -T::one() { lo } else { T::lit(-0.999) };
    BoundarySample::with_origin_exponent(
        move |y| if y > T::zero() { g.eval(y) } else { T::zero() },
        SupportHint::AlgebraicDecay(decay),
        SmoothnessHint::Smooth,
        lo,
    )
}

/// Nystrom discretization of `K_a` on a log-grid with weight `c`: the sampled
/// convolution kernel `(2/pi) e^{gamma t}/(e^{2t}-1)`, `gamma = a + c`, with
/// the punctured-trapezoid principal value and its diagonal correction.
/// Independent of the multiplier route; converges at second order in the
/// grid step.
pub fn k_alpha_nystrom<T: Scalar>(a: T, grid: &LogGrid<T>, g: &[T]) -> Result<Vec<T>> {
    let gamma = a + grid.weight;
    if !(gamma > T::zero() && gamma < T::two()) {
        return Err(Error::OutOfBoundednessRange {
            exponent: gamma.to_f64_lossy(),
            lo: 0.0,
            hi: 2.0,
        });
    }
    let n = g.len();
    let h = grid.h;
    let two_over_pi = T::two() * T::FRAC_1_PI();
    let kernel: Vec<T> = (0..2 * n - 1)
        .map(|m| {
            let j = m as isize - (n as isize - 1);
            if j == 0 {
                return T::zero();
            }
            let tau = h * T::from_isize(j).expect("offset");
            two_over_pi * (gamma * tau).exp() / (T::two() * tau).exp_m1()
        })
        .collect();
    let diag = h * (gamma - T::one()) * T::FRAC_1_PI();
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = T::zero();
            for (j, gj) in g.iter().enumerate() {
                acc = acc + kernel[i + n - 1 - j] * *gj;
            }
            let deriv = if i > 0 && i + 1 < n {
                (g[i + 1] - g[i - 1]) * T::half() * T::FRAC_1_PI()
            } else {
                T::zero()
            };
            acc * h + diag * g[i] - deriv
        })
        .collect())
}
