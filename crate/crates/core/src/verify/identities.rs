//! Identity cross-checks: symbols, closed forms against quadrature, kernel
//! sign structure, solver routes and thresholds.

use std::f64::consts::PI;

use num_complex::Complex;
use rayon::prelude::*;

use super::checks::fit_slope;
use super::report::VerificationReport;
use crate::config::{alpha_in_window, k_of_alpha, threshold, Branch, Problem};
use crate::ProblemConfig;
use crate::error::{Error, Result};
use crate::operators::{
    apply_ek_split, k_alpha_nystrom, m_gamma, BoundarySample, BoundaryVectorField, HalfLineInverse,
    LogGridSettings, OpSign, SplitField, INVERSION_BAND,
};
use crate::quadrature::logline::{log_line_multiplier_apply, LogGrid};
use crate::PVQuadratureScheme;
use crate::solver::{
    bump, configure, poisson_kernel, quadrant_integral_identity, residue_i, residue_i_quadrature,
    DirichletRoute, DirichletSolution, GradientSolution, Preset, SolverOptions,
};

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

/// `(1 - k m_{1/p})(1 + k m_{alpha+1/p}) = 1 + k^2` on `xi in [-10, 10]`,
/// `alpha` the exponent of the inverse of `I - k K_0` on `L_p`.
pub fn multiplier_identity(k: f64, p: f64) -> Result<VerificationReport> {
    let alpha = HalfLineInverse::new(OpSign::Minus, k, p)?.alpha;
    let one = Complex::new(1.0, 0.0);
    let err = (0..=2000)
        .map(|j| {
            let xi = -10.0 + 0.01 * j as f64;
            let lhs = (one - m_gamma(1.0 / p, xi) * k) * (one + m_gamma(alpha + 1.0 / p, xi) * k);
            (lhs - (1.0 + k * k)).norm()
        })
        .fold(0.0, f64::max);
    Ok(VerificationReport::new("multiplier-identity", err, 1e-12)
        .param("k", k)
        .param("p", p)
        .param("alpha", alpha))
}

/// Sampling weight for the round trip: the samples `e^{c s} f(e^s)` of
/// `K_alpha f` decay like `e^{(alpha+c) s}` and `e^{-(2-alpha-c) s}` at the
/// window ends, so `c` centres `alpha + c` at 1 when it can (`c` must stay
/// in `(0, 2)` for `K_0`).
pub fn round_trip_weight(alpha: f64) -> f64 {
    (1.0 - alpha).clamp(0.05, 1.95)
}

/// Window half-width (in `ln x`) that lets the slowest tail decay to
/// about `e^-18`.
pub fn round_trip_half_width(alpha: f64) -> f64 {
    let c = round_trip_weight(alpha);
    let rate = (alpha + c).min(2.0 - alpha - c);
    (18.0 / rate).clamp(20.0, 80.0)
}

/// Relative `L_2` error (in the sampling weight) of
/// `(I - k K_0)[(1+k^2)^{-1}(I + k K_alpha) f] - f` on an `n`-point
/// log-grid over `ln x in [-half_width, half_width]`. The inverse is applied
/// as a Fourier multiplier and `K_0` by Nystrom quadrature, so the check
/// does not reuse the inverse's discretization.
pub fn inverse_round_trip<F: Fn(f64) -> f64>(k: f64, p: f64, f: F, n: usize, half_width: f64) -> Result<f64> {
    let inv = HalfLineInverse::new(OpSign::Minus, k, p)?;
    let h = 2.0 * half_width / (n - 1) as f64;
    let grid = LogGrid::new(-half_width, h, n, round_trip_weight(inv.alpha));
    let g = grid.sample(f);
    let gc: Vec<Complex<f64>> = g.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let d = 1.0 / (1.0 + k * k);
    let gamma = inv.alpha + grid.weight;
    let v: Vec<f64> = log_line_multiplier_apply(&gc, h, |xi| (Complex::new(1.0, 0.0) + m_gamma(gamma, xi) * k) * d)?
        .into_iter()
        .map(|z| z.re)
        .collect();
    let kv = k_alpha_nystrom(0.0, &grid, &v)?;
    let (mut num, mut den) = (0.0, 0.0);
    for j in 0..n {
        num += (v[j] - k * kv[j] - g[j]).powi(2);
        den += g[j].powi(2);
    }
    Ok((num / den).sqrt())
}

/// Half-line test functions for [`inverse_round_trip`].
pub fn round_trip_functions() -> Vec<(&'static str, fn(f64) -> f64)> {
    fn bump(x: f64) -> f64 {
        let r = (x - 1.0) / 0.5;
        if r.abs() < 1.0 {
            (1.0 - 1.0 / (1.0 - r * r)).exp()
        } else {
            0.0
        }
    }
    fn log_gaussian(x: f64) -> f64 {
        (-(x.ln() - 0.3).powi(2)).exp()
    }
    fn gamma_density(x: f64) -> f64 {
        x * x * (-x).exp()
    }
    vec![("bump", bump), ("log-gaussian", log_gaussian), ("x2-exp", gamma_density)]
}

/// Round trip at `n` and `2n` points (`None`: grid step about 0.01 over
/// [`round_trip_half_width`]): passes when the coarse error is
/// below `1e-4` and refinement at least halves it (or both sit at the
/// roundoff floor).
pub fn inverse_round_trip_report(k: f64, p: f64, n: Option<usize>) -> Result<VerificationReport> {
    const FLOOR: f64 = 1e-11;
    let alpha = HalfLineInverse::new(OpSign::Minus, k, p)?.alpha;
    let half_width = round_trip_half_width(alpha);
    let n = n.unwrap_or((2.0 * half_width / 0.008).ceil() as usize);
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for (name, f) in round_trip_functions() {
        let e1 = inverse_round_trip(k, p, f, n, half_width)?;
        let e2 = inverse_round_trip(k, p, f, 2 * n, half_width)?;
        let refined = e2 <= (0.5 * e1).max(FLOOR);
        worst = worst.max(if refined { e1 } else { f64::INFINITY });
        notes.push(format!("{name}: {e1:.2e} -> {e2:.2e}"));
    }
    Ok(VerificationReport::new("inverse-round-trip", worst, 1e-4)
        .param("k", k)
        .param("p", p)
        .param("n", n)
        .param("half_width", half_width)
        .note(notes.join("; ")))
}

fn gaussian_pair() -> BoundaryVectorField<f64> {
    let f0 = BoundarySample::from_fn(|y: f64| (-(y - 0.4) * (y - 0.4)).exp());
    let f1 = BoundarySample::from_fn(|y: f64| y * (-y * y).exp());
    BoundaryVectorField::new(f0, f1)
}

/// `E_k^2 = I` on the split log-grid.
pub fn hardy_involution(k: f64) -> Result<VerificationReport> {
    let g = SplitField::sample(&gaussian_pair(), &LogGridSettings::default())?;
    let ee = apply_ek_split(&apply_ek_split(&g, k), k);
    Ok(VerificationReport::new("hardy-involution", ee.rel_l2_distance(&g), 1e-4).param("k", k))
}

/// Residue closed form against principal-value quadrature over a 3x3x3
/// sweep of `(alpha, t, x)`.
pub fn residue_sweep(scheme: &PVQuadratureScheme) -> Result<VerificationReport> {
    let (beta, gamma, z) = (1.0, 0.7, 1.3);
    let mut tuples = Vec::new();
    for &a in &[-1.5, -0.5, 0.5] {
        for &t in &[0.5, 1.0, 2.0] {
            for &x in &[-1.0, 0.5, 3.0] {
                tuples.push((a, t, x));
            }
        }
    }
    let errs: Vec<f64> = tuples
        .par_iter()
        .map(|&(a, t, x)| {
            let c = residue_i(a, beta, gamma, t, x, z)?;
            let q = residue_i_quadrature(a, beta, gamma, t, x, z, scheme)?;
            Ok(rel(c, q))
        })
        .collect::<Result<_>>()?;
    let worst = errs.into_iter().fold(0.0, f64::max);
    Ok(VerificationReport::new("residue-lemma", worst, 1e-6).param("tuples", tuples.len()))
}

/// Quadrant `s`-integral closed form on nine `(alpha, t, x, y)` tuples.
pub fn quadrant_sweep(scheme: &PVQuadratureScheme) -> Result<VerificationReport> {
    let tuples = [
        (0.5, 1.0, 1.0, 2.0),
        (-1.2, 0.5, 1.0, 1.0),
        (0.0, 2.0, 0.3, 0.5),
        (-0.6, 1.0, 2.0, 0.5),
        (0.8, 0.3, 0.3, 1.0),
        (-1.7, 1.5, 0.5, 3.0),
        (0.3, 0.2, 2.0, 0.1),
        (-1.05, 1.0, 1.0, 1.0),
        (0.95, 3.0, 1.0, 0.7),
    ];
    let errs: Vec<f64> = tuples
        .par_iter()
        .map(|&(a, t, x, y)| {
            let (l, r) = quadrant_integral_identity(a, t, x, y, scheme)?;
            Ok(rel(l, r))
        })
        .collect::<Result<_>>()?;
    let worst = errs.into_iter().fold(0.0, f64::max);
    Ok(VerificationReport::new("quadrant-identity", worst, 1e-6).param("tuples", tuples.len()))
}

/// The kernel at `x = 0` against `cos(pi alpha/2)/pi t^(1+alpha) |y|^-alpha/(t^2+y^2)`
/// on 100 `(t, y)` pairs.
pub fn axis_formula(alpha: f64) -> Result<VerificationReport> {
    let mut worst = 0.0f64;
    for i in 0..10 {
        let t = 0.05 * 1.6f64.powi(i);
        for j in 0..10 {
            let y = (-3.0 + 0.6 * j as f64) + 0.17;
            let want = (PI * alpha / 2.0).cos() / PI * t.powf(1.0 + alpha) * y.abs().powf(-alpha) / (t * t + y * y);
            worst = worst.max(rel(poisson_kernel(alpha, t, 0.0, y)?, want));
        }
    }
    Ok(VerificationReport::new("axis-formula", worst, 1e-12).param("alpha", alpha))
}

/// Smallest kernel value over a 200 x 200 `(x, y)` sample at `t = 0.5`,
/// `y` dense near 0.
pub fn kernel_minimum(alpha: f64) -> Result<f64> {
    let xs: Vec<f64> = (0..200).map(|i| -3.0 + 6.0 * (i as f64 + 0.5) / 200.0).collect();
    let ys: Vec<f64> = (0..200)
        .map(|j| {
            let u = -1.0 + 2.0 * (j as f64 + 0.5) / 200.0;
            4.0 * u.powi(3)
        })
        .collect();
    let mins: Vec<f64> = xs
        .par_iter()
        .map(|&x| {
            ys.iter()
                .map(|&y| poisson_kernel(alpha, 0.5, x, y))
                .try_fold(f64::INFINITY, |m, v| v.map(|v| m.min(v)))
        })
        .collect::<Result<_>>()?;
    Ok(mins.into_iter().fold(f64::INFINITY, f64::min))
}

/// The kernel is nonnegative for `alpha in (-1, 1)`.
pub fn positivity_scan(alpha: f64) -> Result<VerificationReport> {
    let m = kernel_minimum(alpha)?;
    Ok(VerificationReport::new("kernel-positivity", (-m).max(0.0), 1e-12)
        .param("alpha", alpha)
        .note(format!("min sample {m:.3e}")))
}

/// A strictly negative kernel sample exists (error 0 if found, 1 if not).
pub fn negative_witness(alpha: f64) -> Result<VerificationReport> {
    let m = kernel_minimum(alpha)?;
    Ok(VerificationReport::new("kernel-negative-witness", if m < 0.0 { 0.0 } else { 1.0 }, 0.5)
        .param("alpha", alpha)
        .note(format!("min sample {m:.3e}")))
}

/// For `alpha < -1` and nonnegative bump data: `U(t, 0) < 0` for `t` in
/// `[1e-3, 1e-1]` and `ln|U(t,0)|` has slope `1 + alpha`.
pub fn axis_blowup(alpha: f64, p: f64, scheme: &PVQuadratureScheme) -> Result<VerificationReport> {
    let cfg = ProblemConfig {
        k: k_of_alpha(alpha),
        p,
        q: p / (p - 1.0),
        branch: Branch::LpInfBranch,
        alpha,
    };
    let opts = SolverOptions {
        scheme: scheme.clone(),
        ..SolverOptions::default()
    };
    let sol = DirichletSolution::new(bump(1.0, 0.5)?, &cfg, &opts)?;
    let ts: Vec<f64> = (0..9).map(|i| 1e-3 * 10f64.powf(i as f64 / 4.0)).collect();
    let vals: Vec<f64> = ts.par_iter().map(|&t| sol.value(t, 0.0)).collect::<Result<_>>()?;
    let negative = vals.iter().all(|&v| v < 0.0);
    let pts: Vec<(f64, f64)> = ts.iter().zip(&vals).map(|(t, v)| (t.ln(), v.abs().ln())).collect();
    let slope = fit_slope(&pts);
    let err = if negative { (slope - (1.0 + alpha)).abs() } else { f64::INFINITY };
    Ok(VerificationReport::new("axis-blowup", err, 0.05)
        .param("alpha", alpha)
        .note(format!("slope {slope:.4}, all negative: {negative}")))
}

/// `k = 0`: the solver reproduces the Poisson extension of `1/(pi(1+y^2))`
/// at 200 points.
pub fn dirichlet_classical(scheme: &PVQuadratureScheme) -> Result<VerificationReport> {
    let cfg = configure(Problem::Dirichlet, 0.0, 2.0, Branch::LpInfBranch)?;
    let opts = SolverOptions {
        scheme: scheme.clone(),
        ..SolverOptions::default()
    };
    let sol = DirichletSolution::new(Preset::Rational.sample(), &cfg, &opts)?;
    let pts: Vec<(f64, f64)> = (0..10)
        .flat_map(|i| (0..20).map(move |j| (0.05 + 0.3 * i as f64, -4.75 + 0.5 * j as f64)))
        .collect();
    let errs: Vec<f64> = pts
        .par_iter()
        .map(|&(t, x)| {
            let want = (1.0 + t) / (PI * ((1.0 + t).powi(2) + x * x));
            Ok(rel(sol.value(t, x)?, want))
        })
        .collect::<Result<_>>()?;
    let worst = errs.into_iter().fold(0.0, f64::max);
    Ok(VerificationReport::new("dirichlet-classical", worst, 1e-8).param("points", pts.len()))
}

/// Kernel route against the density route (boundary density plus Cauchy
/// extension).
pub fn dirichlet_routes(k: f64, p: f64, branch: Branch) -> Result<VerificationReport> {
    let cfg = configure(Problem::Dirichlet, k, p, branch)?;
    let u = Preset::Gaussian.sample::<f64>();
    let a = DirichletSolution::new(u.clone(), &cfg, &SolverOptions::default())?;
    let b = DirichletSolution::new(
        u,
        &cfg,
        &SolverOptions {
            route: DirichletRoute::Density,
            ..SolverOptions::default()
        },
    )?;
    let mut worst = 0.0f64;
    for &(t, x) in &[(0.3, 0.5), (1.0, -1.2), (0.1, 2.0)] {
        worst = worst.max(rel(b.value(t, x)?, a.value(t, x)?));
    }
    Ok(VerificationReport::new("dirichlet-routes", worst, 1e-4)
        .param("k", k)
        .param("p", p)
        .param("alpha", cfg.alpha))
}

/// The prescribed boundary quantity of a gradient solution at `t = 1e-4`
/// against its data (Gaussian).
pub fn gradient_trace(problem: Problem, k: f64, p: f64) -> Result<VerificationReport> {
    let cfg = configure(problem, k, p, Branch::LpInfBranch)?;
    let data = Preset::Gaussian.sample::<f64>();
    let opts = SolverOptions::default();
    let sol = match problem {
        Problem::Neumann => GradientSolution::neumann(&data, &cfg, &opts)?,
        Problem::Regularity => GradientSolution::regularity(&data, &cfg, &opts)?,
        Problem::Dirichlet => return Err(Error::DomainError("not a gradient problem".into())),
    };
    let mut worst = 0.0f64;
    for &x in &[-1.0, -0.2, 0.3, 0.8, 1.7] {
        let got = sol.prescribed(sol.value(1e-4, x)?, x);
        worst = worst.max((got - data.eval(x)).abs());
    }
    Ok(VerificationReport::new(format!("{}-trace", problem.name()), worst, 2e-3)
        .param("k", k)
        .param("p", p))
}

/// Whether `k` sits on the problem's threshold for `p`.
pub fn at_threshold(problem: Problem, k: f64, p: f64) -> bool {
    threshold(problem, p).is_ok_and(|th| (k - th).abs() <= INVERSION_BAND)
}

/// Expected failure: constructing the solver at a threshold must raise
/// `NotInvertible` (error 0 when it does, 1 otherwise).
pub fn threshold_expectation(problem: Problem, k: f64, p: f64) -> VerificationReport {
    let data = Preset::Bump.sample::<f64>();
    let opts = SolverOptions::default();
    let outcome: Result<()> = (|| {
        let branch = Branch::LpInfBranch;
        let cfg = configure(problem, k, p, branch)?;
        match problem {
            Problem::Dirichlet => DirichletSolution::new(data.clone(), &cfg, &opts).map(|_| ()),
            Problem::Neumann => GradientSolution::neumann(&data, &cfg, &opts).map(|_| ()),
            Problem::Regularity => GradientSolution::regularity(&data, &cfg, &opts).map(|_| ()),
        }
    })();
    let (err, note) = match outcome {
        Err(e @ Error::NotInvertible { .. }) => (0.0, e.to_string()),
        Err(e) => (1.0, format!("unexpected error: {e}")),
        Ok(()) => (1.0, "solver accepted a threshold configuration".to_string()),
    };
    let mut r = VerificationReport::new(format!("{}-threshold", problem.name()), err, 0.5)
        .param("k", k)
        .param("p", p)
        .note(note);
    r.expected_failure = true;
    r
}

/// `alpha` of the boundary-equation branch, if `k` is not degenerate there.
pub fn lpinf_alpha(k: f64, p: f64) -> Option<f64> {
    alpha_in_window(k, 1.0 / (p / (p - 1.0)) - 2.0).ok()
}
