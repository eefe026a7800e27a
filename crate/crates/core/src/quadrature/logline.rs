//! Log-line discretization of dilation-invariant half-line operators.
//!
//! A function `f` on `(0, inf)` is sampled as `g(s) = e^{c s} f(e^s)` on a
//! uniform grid in `s`. With `c = 1/p` this is the `L_p` isometry; other
//! weights are used where they give faster decay at the window ends. A kernel
//! homogeneous of degree -1 becomes a convolution in `s`, which is applied as
//! a Fourier multiplier with the convention `g^(xi) = int g(s) e^{-i xi s} ds`.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative size allowed at the window ends before a leak is reported.
pub const WINDOW_LEAK_TOLERANCE: f64 = 1e-10;

/// Uniform grid `s_j = s0 + j h` on the log-line with sampling weight `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogGrid<T> {
    pub s0: T,
    pub h: T,
    pub n: usize,
    pub weight: T,
}

impl<T: Scalar> LogGrid<T> {
    pub fn new(s0: T, h: T, n: usize, weight: T) -> Self {
        Self { s0, h, n, weight }
    }

    /// Grid covering `[s_lo, s_hi]` with spacing at most `h`.
    pub fn covering(s_lo: T, s_hi: T, h: T, weight: T) -> Self {
        let n = ((s_hi - s_lo) / h).ceil().to_usize().unwrap_or(1).max(2) + 1;
        let h = (s_hi - s_lo) / T::from_usize(n - 1).expect("grid size");
        Self::new(s_lo, h, n, weight)
    }

    /// The isometry `L_p(R+) -> L_p(R)`, `f(x) -> e^{t/p} f(e^t)`.
    pub fn lp_isometry(p: T, s_lo: T, s_hi: T, h: T) -> Self {
        Self::covering(s_lo, s_hi, h, p.recip())
    }

    pub fn s(&self, j: usize) -> T {
        self.s0 + self.h * T::from_usize(j).expect("index")
    }

    pub fn x(&self, j: usize) -> T {
        self.s(j).exp()
    }

    pub fn s_max(&self) -> T {
        self.s(self.n - 1)
    }

    /// Weighted samples `e^{c s_j} f(e^{s_j})`.
    pub fn sample<F: Fn(T) -> T>(&self, f: F) -> Vec<T> {
        (0..self.n)
            .map(|j| {
                let s = self.s(j);
                (self.weight * s).exp() * f(s.exp())
            })
            .collect()
    }

    /// Angular frequency of FFT bin `j`.
    pub fn frequency(&self, j: usize) -> T {
        frequency(j, self.n, self.h)
    }
}

fn frequency<T: Scalar>(j: usize, n: usize, h: T) -> T {
    let two_pi = T::PI() * T::two();
    let nn = T::from_usize(n).expect("size");
    let jj = if 2 * j <= n {
        T::from_usize(j).expect("index")
    } else {
        -T::from_usize(n - j).expect("index")
    };
    two_pi * jj / (nn * h)
}

/// Apply the Fourier multiplier `m` to samples `g` on a uniform grid of step
/// `h`: forward FFT, pointwise multiply, inverse FFT. The discrete operator is
/// periodic, so `g` must decay at both ends of the window.
pub fn log_line_multiplier_apply<T, M>(g: &[Complex<T>], h: T, m: M) -> Result<Vec<Complex<T>>>
where
    T: Scalar,
    M: Fn(T) -> Complex<T>,
{
    check_window(g)?;
    Ok(log_line_multiplier_apply_unchecked(g, h, m))
}

/// [`log_line_multiplier_apply`] without the window check, for intermediate
/// results of composed multipliers.
pub fn log_line_multiplier_apply_unchecked<T, M>(g: &[Complex<T>], h: T, m: M) -> Vec<Complex<T>>
where
    T: Scalar,
    M: Fn(T) -> Complex<T>,
{
    let n = g.len();
    let mut planner = FftPlanner::<T>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut buf = g.to_vec();
    forward.process(&mut buf);
    let scale = T::from_usize(n).expect("size").recip();
    for (j, b) in buf.iter_mut().enumerate() {
        let symbol = if n % 2 == 0 && 2 * j == n {
            // Nyquist bin: average the two aliased frequencies.
            let w = frequency::<T>(j, n, h);
            (m(w) + m(-w)) * T::half()
        } else {
            m(frequency(j, n, h))
        };
        *b = *b * symbol * scale;
    }
    inverse.process(&mut buf);
    buf
}

/// Reject samples that have not decayed at the window ends.
pub fn check_window<T: Scalar>(g: &[Complex<T>]) -> Result<()> {
    if g.len() < 2 {
        return Err(Error::DomainError("log-grid needs at least two samples".into()));
    }
    let peak = g.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    if peak == T::zero() {
        return Ok(());
    }
    let ends = g[0].norm().max(g[g.len() - 1].norm());
    let ratio = ends / peak;
    if ratio > T::lit(WINDOW_LEAK_TOLERANCE) {
        return Err(Error::WindowLeak(ratio.to_f64_lossy()));
    }
    Ok(())
}

/// A half-line function stored as weighted samples on a [`LogGrid`], with
/// power-law continuation `f(y) ~ y^{lo_exponent}` below and
/// `y^{hi_exponent}` above the window.
#[derive(Clone, Debug)]
pub struct LogGridFunction<T> {
    pub grid: LogGrid<T>,
    pub values: Arc<Vec<T>>,
    pub lo_exponent: T,
    pub hi_exponent: T,
}

const STENCIL: usize = 8;

impl<T: Scalar> LogGridFunction<T> {
    pub fn new(grid: LogGrid<T>, values: Vec<T>, lo_exponent: T, hi_exponent: T) -> Self {
        assert_eq!(grid.n, values.len(), "sample count must match the grid");
        Self {
            grid,
            values: Arc::new(values),
            lo_exponent,
            hi_exponent,
        }
    }

    /// Unweighted value `f(y)` at `y > 0`.
    pub fn eval(&self, y: T) -> T {
        if !(y > T::zero()) {
            return T::zero();
        }
        let s = y.ln();
        let g = &self.grid;
        if s < g.s0 {
            let y0 = g.s0.exp();
            return self.unweighted(0) * (y / y0).powf(self.lo_exponent);
        }
        if s > g.s_max() {
            let y1 = g.s_max().exp();
            return self.unweighted(g.n - 1) * (y / y1).powf(self.hi_exponent);
        }
        self.interpolate_weighted(s) * (-g.weight * s).exp()
    }

    fn unweighted(&self, j: usize) -> T {
        self.values[j] * (-self.grid.weight * self.grid.s(j)).exp()
    }

    /// Local Lagrange interpolation of the weighted samples.
    fn interpolate_weighted(&self, s: T) -> T {
        let g = &self.grid;
        let n = g.n;
        if n < STENCIL {
            // Linear fallback for tiny grids.
            let u = (s - g.s0) / g.h;
            let j = u.floor().to_usize().unwrap_or(0).min(n - 2);
            let frac = u - T::from_usize(j).expect("index");
            return self.values[j] * (T::one() - frac) + self.values[j + 1] * frac;
        }
        let u = (s - g.s0) / g.h;
        let j0 = u.floor().to_isize().unwrap_or(0);
        let start = (j0 - (STENCIL as isize / 2 - 1)).clamp(0, (n - STENCIL) as isize) as usize;
        let mut acc = T::zero();
        for a in 0..STENCIL {
            let xa = T::from_usize(start + a).expect("index");
            if (u - xa).abs() < T::epsilon() {
                return self.values[start + a];
            }
            let mut l = T::one();
            for b in 0..STENCIL {
                if a != b {
                    let xb = T::from_usize(start + b).expect("index");
                    l = l * (u - xb) / (xa - xb);
                }
            }
            acc = acc + l * self.values[start + a];
        }
        acc
    }
}
