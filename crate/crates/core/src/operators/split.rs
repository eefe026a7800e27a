//! Grid-to-grid realization of `E_k` on a split log-grid.
//!
//! A function on the line is stored as four half-line arrays
//! `f0(+a), f0(-a), f1(+a), f1(-a)`, `a = e^s`, each weighted by `e^{s/2}`
//! (the `L_2` isometry). On each half-line the Hilbert transform splits into
//! `D g(a) = (1/pi) p.v. int_0^inf g(y)/(a-y) dy` and
//! `S g(a) = (1/pi) int_0^inf g(y)/(a+y) dy`, both Fourier multipliers on the
//! log-line, and the coupling block of `E_k` is `S` applied to combinations of
//! the half-line pieces.

use num_complex::Complex;
use rayon::prelude::*;

use super::boundary::BoundaryVectorField;
use super::halfline::LogGridSettings;
use super::pointwise::coupling;
use super::symbols::{hilbert_half_symbol, stieltjes_symbol};
use crate::error::Result;
use crate::quadrature::logline::{check_window, log_line_multiplier_apply_unchecked, LogGrid};
use crate::scalar::Scalar;

/// Samples of a boundary vector field on a split log-grid.
#[derive(Clone, Debug)]
pub struct SplitField<T> {
    pub grid: LogGrid<T>,
    /// `[f0(+a), f0(-a), f1(+a), f1(-a)]`, weighted.
    pub parts: [Vec<T>; 4],
}

impl<T: Scalar> SplitField<T> {
    /// Sample `f` on a window wide enough for `E_k f` (which decays like
    /// `1/|x|`) to fall below the settings' tolerance at the ends.
    pub fn sample(f: &BoundaryVectorField<T>, settings: &LogGridSettings) -> Result<Self> {
        let ext = f.extent();
        let rate = T::half();
        let reach = T::lit(settings.tolerance).recip().ln() / rate;
        let s_lo = (ext * T::lit(1e-2)).ln() - reach;
        let s_hi = ext.ln() + reach;
        let n = match settings.points {
            Some(n) => n,
            None => ((s_hi - s_lo) / T::lit(settings.step))
                .ceil()
                .to_usize()
                .unwrap_or(16)
                .max(16)
                .next_power_of_two(),
        };
        let grid = LogGrid::new(s_lo, (s_hi - s_lo) / T::from_usize(n - 1).expect("n"), n, T::half());
        let sample = |comp: usize, side: T| -> Vec<T> {
            (0..grid.n)
                .into_par_iter()
                .map(|j| {
                    let s = grid.s(j);
                    (s * T::half()).exp() * f.eval(side * s.exp())[comp]
                })
                .collect()
        };
        let parts = [
            sample(0, T::one()),
            sample(0, -T::one()),
            sample(1, T::one()),
            sample(1, -T::one()),
        ];
        let out = Self { grid, parts };
        for p in &out.parts {
            check_window(&to_complex(p))?;
        }
        Ok(out)
    }

    /// Value at `x != 0` by local interpolation.
    pub fn eval(&self, x: T) -> [T; 2] {
        let (i0, i1) = if x > T::zero() { (0, 2) } else { (1, 3) };
        let a = x.abs();
        let w = (-(a.ln()) * T::half()).exp();
        [
            interp(&self.grid, &self.parts[i0], a.ln()) * w,
            interp(&self.grid, &self.parts[i1], a.ln()) * w,
        ]
    }

    /// Relative `L_2` distance `||self - other|| / ||other||`.
    pub fn rel_l2_distance(&self, other: &Self) -> T {
        let mut num = T::zero();
        let mut den = T::zero();
        for (a, b) in self.parts.iter().zip(&other.parts) {
            for (x, y) in a.iter().zip(b) {
                num = num + (*x - *y) * (*x - *y);
                den = den + *y * *y;
            }
        }
        (num / den).sqrt()
    }

    pub fn scale_add(&self, a: T, other: &Self, b: T) -> Self {
        let parts = std::array::from_fn(|i| {
            self.parts[i]
                .iter()
                .zip(&other.parts[i])
                .map(|(x, y)| *x * a + *y * b)
                .collect()
        });
        Self {
            grid: self.grid,
            parts,
        }
    }
}

fn to_complex<T: Scalar>(v: &[T]) -> Vec<Complex<T>> {
    v.iter().map(|&x| Complex::new(x, T::zero())).collect()
}

fn interp<T: Scalar>(grid: &LogGrid<T>, v: &[T], s: T) -> T {
    use crate::quadrature::logline::LogGridFunction;
    // Weighted samples with zero weight interpolate directly in s.
    let g = LogGrid::new(grid.s0, grid.h, grid.n, T::zero());
    LogGridFunction::new(g, v.to_vec(), T::zero(), T::zero()).eval(s.exp())
}

/// `E_k` as a grid-to-grid map on split log-grid samples.
pub fn apply_ek_split<T: Scalar>(f: &SplitField<T>, k: T) -> SplitField<T> {
    let h = f.grid.h;
    let c = f.grid.weight;
    let kap = coupling(k);
    let [f0p, f0m, f1p, f1m] = &f.parts;
    let d = |g: &[T]| re(log_line_multiplier_apply_unchecked(&to_complex(g), h, |w| hilbert_half_symbol(c, w)));
    let s = |g: &[T]| re(log_line_multiplier_apply_unchecked(&to_complex(g), h, |w| stieltjes_symbol(c, w)));
    let n = f0p.len();
    let comb = |a: &[T], ca: T, b: &[T], cb: T| -> Vec<T> { (0..n).map(|j| a[j] * ca + b[j] * cb).collect() };

    // Hilbert transform of each component in split form.
    let (d0p, d0m, s0p, s0m) = (d(f0p), d(f0m), s(f0p), s(f0m));
    let (d1p, d1m, s1p, s1m) = (d(f1p), d(f1m), s(f1p), s(f1m));
    // Coupling densities: A = f0 + k sgn(y) f1, B = k f0 - sgn(y) f1, summed over both sides.
    let one = T::one();
    let a_sum = comb(&comb(f0p, one, f0m, one), one, &comb(f1p, k, f1m, -k), one);
    let b_sum = comb(&comb(f0p, k, f0m, k), one, &comb(f1p, -one, f1m, one), one);
    let ca = s(&a_sum);
    let cb = s(&b_sum);

    let mut parts: [Vec<T>; 4] = std::array::from_fn(|_| vec![T::zero(); n]);
    for j in 0..n {
        let h1p = d1p[j] + s1m[j];
        let h1m = -s1p[j] - d1m[j];
        let h0p = d0p[j] + s0m[j];
        let h0m = -s0p[j] - d0m[j];
        parts[0][j] = -h1p - kap * ca[j];
        parts[1][j] = -h1m - kap * ca[j];
        parts[2][j] = h0p - kap * cb[j];
        parts[3][j] = h0m + kap * cb[j];
    }
    SplitField {
        grid: f.grid,
        parts,
    }
}

/// Hardy projection `(I ± E_k)/2` on split samples.
pub fn hardy_projection_split<T: Scalar>(sign: T, f: &SplitField<T>, k: T) -> SplitField<T> {
    let e = apply_ek_split(f, k);
    f.scale_add(T::half(), &e, T::half() * sign.sgn())
}

fn re<T: Scalar>(v: Vec<Complex<T>>) -> Vec<T> {
    v.into_iter().map(|z| z.re).collect()
}
