//! Reconstruction of `sgn(T_k)` and of the Cauchy extension from the
//! resolvent families `P_s`, `Q_s` by their `ds/s` integrals.

use num_complex::Complex;
use rayon::prelude::*;

use super::report::VerificationReport;
use crate::ProblemConfig;
use crate::error::{Error, Result};
use crate::operators::{apply_ek, apply_pt, apply_qt, cauchy_extension, BoundaryVectorField};
use crate::quadrature::{gauss_legendre, Rule};
use crate::PVQuadratureScheme;
use crate::scalar::Vec2;

/// Half-width of the `ln s` window; the rest is added as a first-order tail.
const LOG_WINDOW: f64 = 12.0;
/// Half-periods summed before averaging in the oscillatory integral.
const HALF_PERIODS: usize = 48;

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

fn relative(got: [f64; 2], want: [f64; 2]) -> f64 {
    let d = norm([got[0] - want[0], got[1] - want[1]]);
    let n = norm(want);
    if n > 0.0 {
        d / n
    } else {
        d
    }
}

/// Gauss nodes and weights over `[a, b]` split into panels of width `<= w`.
fn panel_nodes(a: f64, b: f64, w: f64, rule: &Rule<f64>) -> Vec<(f64, f64)> {
    let n = ((b - a) / w).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    let mut out = Vec::with_capacity(n * rule.nodes.len());
    for j in 0..n {
        let lo = a + h * j as f64;
        for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
            out.push((lo + 0.5 * h * (1.0 + x), 0.5 * h * wt));
        }
    }
    out
}

/// `(2/pi) int_0^inf Q_s f(x) ds/s`, integrated in `ln s`. `Q_s f` is
/// `O(s)` as `s -> 0` and `O(1/s)` as `s -> inf`, so the parts outside the
/// window are closed by their leading-order tails.
pub fn sgn_reconstruction(
    f: &BoundaryVectorField<f64>,
    x: f64,
    cfg: &ProblemConfig,
    scheme: &PVQuadratureScheme,
) -> Result<[f64; 2]> {
    let rule = gauss_legendre::<f64>(12);
    let q = |s: f64| apply_qt(s, f, x, cfg, scheme);
    let parts: Vec<Vec2<f64>> = panel_nodes(-LOG_WINDOW, LOG_WINDOW, 0.5, &rule)
        .par_iter()
        .map(|&(sig, w)| Ok(q(sig.exp())? * w))
        .collect::<Result<_>>()?;
    let mut acc = parts.into_iter().fold(Vec2::new(0.0, 0.0), |a, b| a + b);
    acc = acc + q((-LOG_WINDOW).exp())? + q(LOG_WINDOW.exp())?;
    Ok((acc * std::f64::consts::FRAC_2_PI).0)
}

/// `(1/pi) int_0^inf (Q_s cos(t/s) + P_s sin(t/s)) ds/s` at `(t, x)`.
///
/// With `u = t/s` the integrand is `(Q cos u + P sin u)/u`. On `(0, pi]` it
/// is integrated in `ln u`; beyond, it is summed over half-periods and the
/// slowly alternating partial sums are accelerated by iterated averaging.
pub fn extension_reconstruction(
    f: &BoundaryVectorField<f64>,
    t: f64,
    x: f64,
    cfg: &ProblemConfig,
    scheme: &PVQuadratureScheme,
) -> Result<[f64; 2]> {
    if !(t > 0.0) {
        return Err(Error::DomainError("extension height must be positive".into()));
    }
    let rule = gauss_legendre::<f64>(12);
    let h = |u: f64| -> Result<Vec2<f64>> {
        let s = t / u;
        Ok(apply_qt(s, f, x, cfg, scheme)? * u.cos() + apply_pt(s, f, x, cfg, scheme)? * u.sin())
    };
    let pi = std::f64::consts::PI;

    let lo = -LOG_WINDOW;
    let parts: Vec<Vec2<f64>> = panel_nodes(lo, pi.ln(), 0.5, &rule)
        .par_iter()
        .map(|&(sig, w)| Ok(h(sig.exp())? * w))
        .collect::<Result<_>>()?;
    let near = parts.into_iter().fold(h(lo.exp())?, |a, b| a + b);

    let halves: Vec<Vec2<f64>> = (1..=HALF_PERIODS)
        .into_par_iter()
        .map(|n| {
            let nodes = panel_nodes(n as f64 * pi, (n + 1) as f64 * pi, pi, &rule);
            let mut acc = Vec2::new(0.0, 0.0);
            for (u, w) in nodes {
                acc = acc + h(u)? * (w / u);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut sums = Vec::with_capacity(HALF_PERIODS);
    let mut running = near;
    for a in halves {
        running = running + a;
        sums.push(running.0);
    }
    let tail = accelerate(&sums)?;
    Ok([tail[0] / pi, tail[1] / pi])
}

/// Iterated averaging of consecutive partial sums. The spread of the last
/// two levels is the convergence test.
fn accelerate(sums: &[[f64; 2]]) -> Result<[f64; 2]> {
    let mut level = sums.to_vec();
    let mut prev = *level.last().expect("nonempty");
    while level.len() > 1 {
        prev = *level.last().expect("nonempty");
        level = level
            .windows(2)
            .map(|w| [0.5 * (w[0][0] + w[1][0]), 0.5 * (w[0][1] + w[1][1])])
            .collect();
    }
    let last = level[0];
    let spread = norm([last[0] - prev[0], last[1] - prev[1]]);
    let scale = norm(last).max(1e-300);
    if !(spread <= 1e-6 * scale.max(1.0)) {
        return Err(Error::OscillatoryNonConvergence(spread));
    }
    Ok(last)
}

/// `sgn(T_k) f(x)` from the `Q_s` integral against the closed-form Cauchy
/// singular integral.
pub fn dunford_reconstruction(
    f: &BoundaryVectorField<f64>,
    x: f64,
    cfg: &ProblemConfig,
    scheme: &PVQuadratureScheme,
) -> Result<VerificationReport> {
    let got = sgn_reconstruction(f, x, cfg, scheme)?;
    let want = apply_ek(f, x, cfg, scheme)?.0;
    Ok(VerificationReport::new("dunford-sgn", relative(got, want), 1e-3)
        .param("k", cfg.k)
        .param("x", x))
}

/// The extension formula against the closed-form Cauchy extension.
pub fn dunford_extension(
    f: &BoundaryVectorField<f64>,
    t: f64,
    x: f64,
    cfg: &ProblemConfig,
    scheme: &PVQuadratureScheme,
) -> Result<VerificationReport> {
    let got = extension_reconstruction(f, t, x, cfg, scheme)?;
    let want = cauchy_extension(t, f, x, cfg, scheme)?.0;
    Ok(VerificationReport::new("dunford-extension", relative(got, want), 1e-3)
        .param("k", cfg.k)
        .param("t", t)
        .param("x", x))
}

/// `int_0^inf s^-2 e^{-x/s} e^{it/s} ds`, integrated in `ln s`.
pub fn scalar_dunford_integral(x: f64, t: f64) -> Complex<f64> {
    let rule = gauss_legendre::<f64>(16);
    let c = Complex::new(x, -t);
    let hi = 40.0;
    let body: Complex<f64> = panel_nodes(-8.0, hi, 0.25, &rule)
        .into_iter()
        .map(|(sig, w)| (-c * (-sig).exp()).exp() * (-sig).exp() * w)
        .sum();
    // Beyond the window the integrand is e^{-sig} (1 - c e^{-sig} + ...).
    body + (-c * (-hi).exp()).exp() * (-hi).exp()
}

/// The scalar identity `int s^-2 e^{-x/s} e^{it/s} ds = (x + it)/(x^2 + t^2)`.
pub fn dunford_scalar_identity(x: f64, t: f64) -> VerificationReport {
    let got = scalar_dunford_integral(x, t);
    let want = Complex::new(x, t) / (x * x + t * t);
    VerificationReport::new("dunford-scalar", (got - want).norm() / want.norm(), 1e-10)
        .param("x", x)
        .param("t", t)
}

/// Dawson's function `D(x) = e^{-x^2} int_0^x e^{u^2} du`, written as
/// `int_0^1 x e^{x^2 (u^2 - 1)} du` and integrated with panels refined
/// toward `u = 1`.
pub fn dawson(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let rule = gauss_legendre::<f64>(20);
    let g = |u: f64| x * (x * x * (u * u - 1.0)).exp();
    let mut edges = vec![1.0];
    let mut d = 0.5;
    let floor = 1e-3 / (1.0 + x * x);
    while d > floor {
        edges.push(1.0 - d);
        d *= 0.5;
    }
    edges.push(0.0);
    edges.reverse();
    edges.dedup();
    let mut s = 0.0;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        for (n, wt) in rule.nodes.iter().zip(&rule.weights) {
            s += 0.5 * (b - a) * wt * g(0.5 * (a + b) + 0.5 * (b - a) * n);
        }
    }
    s
}

/// `H[e^{-y^2}](x) = (2/sqrt(pi)) D(x)` with
/// `H f(x) = (1/pi) p.v. int f(y)/(x-y) dy`.
pub fn hilbert_gaussian(x: f64) -> f64 {
    std::f64::consts::FRAC_2_SQRT_PI * dawson(x)
}

/// For `k = 0` and `f = (e^{-y^2}, 0)`, `sgn(T_0) f = (0, H e^{-y^2})`;
/// the `Q_s` reconstruction against the Dawson oracle.
pub fn dunford_hilbert_gaussian(x: f64, scheme: &PVQuadratureScheme) -> Result<VerificationReport> {
    let cfg = ProblemConfig::derive(0.0, 2.0, crate::config::Branch::H1Branch)?;
    let f = BoundaryVectorField::normal(crate::solver::Preset::Gaussian.sample());
    let got = sgn_reconstruction(&f, x, &cfg, scheme)?;
    let want = [0.0, hilbert_gaussian(x)];
    Ok(VerificationReport::new("dunford-hilbert-gaussian", relative(got, want), 1e-3).param("x", x))
}
