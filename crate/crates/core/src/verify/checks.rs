//! Finite-difference and quadrature oracles for constructed solutions. All
//! derivatives here are difference quotients of the evaluated field, never
//! the closed-form derivative expressions.

use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::VerificationReport;
use crate::ProblemConfig;
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, End, Feature, Rule};
use crate::PVQuadratureScheme;
use crate::solver::{FieldGrid, FieldKind};

/// Pointwise evaluator of a potential `U(t, x)`.
pub trait Potential: Fn(f64, f64) -> Result<f64> + Sync {}
impl<F: Fn(f64, f64) -> Result<f64> + Sync> Potential for F {}

fn second_difference(um: f64, u0: f64, up: f64, hm: f64, hp: f64) -> f64 {
    2.0 * (hm * up - (hm + hp) * u0 + hp * um) / (hm * hp * (hm + hp))
}

/// Max 5-point Laplacian over interior nodes of each open quadrant, divided
/// by the largest second difference seen (floored at the roundoff level of
/// the samples).
pub fn laplacian_residual(grid: &FieldGrid<f64>) -> Result<f64> {
    if grid.kind != FieldKind::Potential {
        return Err(Error::DomainError("Laplacian residual needs a potential grid".into()));
    }
    let t = &grid.t_levels;
    let x = &grid.x_nodes;
    if t.len() < 3 {
        return Err(Error::GridTooCoarse(format!("{} height levels, need 3", t.len())));
    }
    let interior: Vec<usize> = (1..x.len().saturating_sub(1))
        .filter(|&j| x[j - 1].signum() == x[j].signum() && x[j + 1].signum() == x[j].signum())
        .collect();
    for side in [-1.0, 1.0] {
        let present = x.iter().any(|v| v.signum() == side);
        let n = interior.iter().filter(|&&j| x[j].signum() == side).count();
        if present && n < 3 {
            return Err(Error::GridTooCoarse(format!(
                "{n} interior nodes in the quadrant sgn x = {side}, need 3"
            )));
        }
    }
    let u = |i: usize, j: usize| grid.at(i, j)[0];
    let mut res = 0.0f64;
    let mut scale = 0.0f64;
    for i in 1..t.len() - 1 {
        for &j in &interior {
            let dtt = second_difference(u(i - 1, j), u(i, j), u(i + 1, j), t[i] - t[i - 1], t[i + 1] - t[i]);
            let dxx = second_difference(u(i, j - 1), u(i, j), u(i, j + 1), x[j] - x[j - 1], x[j + 1] - x[j]);
            res = res.max((dtt + dxx).abs());
            scale = scale.max(dtt.abs()).max(dxx.abs());
        }
    }
    if !res.is_finite() {
        return Err(Error::QuadratureFailure);
    }
    // Below this the second differences are roundoff in the samples.
    let hmin = t.windows(2).chain(x.windows(2)).map(|w| (w[1] - w[0]).abs()).fold(f64::INFINITY, f64::min);
    let floor = 1e-10 * grid.max_abs() / (hmin * hmin);
    let scale = scale.max(floor);
    Ok(if scale > 0.0 { res / scale } else { 0.0 })
}

/// [`laplacian_residual`] of a tabulated potential as a report.
pub fn pde_residual(grid: &FieldGrid<f64>, cfg: &ProblemConfig, tolerance: f64) -> Result<VerificationReport> {
    let r = laplacian_residual(grid)?;
    Ok(VerificationReport::new("pde-residual", r, tolerance)
        .param("k", cfg.k)
        .param("alpha", cfg.alpha)
        .param("nodes", grid.t_levels.len() * grid.x_nodes.len()))
}

/// Normalized 5-point residual at fixed points with stencil width `h`.
pub fn stencil_residual<F: Potential>(u: &F, points: &[(f64, f64)], h: f64) -> Result<f64> {
    for &(t, x) in points {
        if !(t > h) || !(x.abs() > h) {
            return Err(Error::GridTooCoarse(format!(
                "stencil of width {h} at ({t}, {x}) leaves its quadrant"
            )));
        }
    }
    let rows: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&(t, x)| {
            let c = u(t, x)?;
            let dtt = (u(t + h, x)? - 2.0 * c + u(t - h, x)?) / (h * h);
            let dxx = (u(t, x + h)? - 2.0 * c + u(t, x - h)?) / (h * h);
            Ok(((dtt + dxx).abs(), dtt.abs().max(dxx.abs())))
        })
        .collect::<Result<_>>()?;
    let res = rows.iter().fold(0.0f64, |m, r| m.max(r.0));
    let scale = rows.iter().fold(0.0f64, |m, r| m.max(r.1));
    Ok(if scale > 0.0 { res / scale } else { 0.0 })
}

/// Observed order of the 5-point residual when the stencil is halved; the
/// report's error is the distance of that order from 2.
pub fn pde_residual_order<F: Potential>(
    u: &F,
    cfg: &ProblemConfig,
    points: &[(f64, f64)],
    h: f64,
) -> Result<VerificationReport> {
    let r1 = stencil_residual(u, points, h)?;
    let r2 = stencil_residual(u, points, h / 2.0)?;
    let order = (r1 / r2).log2();
    Ok(VerificationReport::new("pde-residual-order", (order - 2.0).abs(), 0.3)
        .param("k", cfg.k)
        .param("alpha", cfg.alpha)
        .param("h", h)
        .note(format!("residual {r1:.3e} -> {r2:.3e}, order {order:.3}")))
}

/// Jump relation `d_x U(t,0+) - d_x U(t,0-) = 2k d_t U(t,0)` with one-sided
/// 3-point stencils of width `delta`; relative to the one-sided slopes.
pub fn transmission_check<F: Potential>(
    u: &F,
    cfg: &ProblemConfig,
    ts: &[f64],
    delta: f64,
) -> Result<VerificationReport> {
    if ts.is_empty() || ts.iter().any(|&t| !(t > 2.0 * delta)) {
        return Err(Error::GridTooCoarse(format!("heights must exceed 2 delta = {}", 2.0 * delta)));
    }
    let k = cfg.k;
    let rows: Vec<(f64, f64)> = ts
        .par_iter()
        .map(|&t| {
            let u0 = u(t, 0.0)?;
            let dp = (-3.0 * u0 + 4.0 * u(t, delta)? - u(t, 2.0 * delta)?) / (2.0 * delta);
            let dm = (3.0 * u0 - 4.0 * u(t, -delta)? + u(t, -2.0 * delta)?) / (2.0 * delta);
            let dt = (u(t + delta, 0.0)? - u(t - delta, 0.0)?) / (2.0 * delta);
            Ok(((dp - dm - 2.0 * k * dt).abs(), dp.abs().max(dm.abs())))
        })
        .collect::<Result<_>>()?;
    let err = rows.iter().fold(0.0f64, |m, r| m.max(r.0));
    let scale = rows.iter().fold(0.0f64, |m, r| m.max(r.1));
    let rel = if scale > 0.0 { err / scale } else { err };
    Ok(VerificationReport::new("transmission", rel, 1e-3)
        .param("k", k)
        .param("alpha", cfg.alpha)
        .param("delta", delta))
}

/// `max_t |U(t, delta) - U(t, -delta)|`.
pub fn continuity_check<F: Potential>(u: &F, cfg: &ProblemConfig, ts: &[f64], delta: f64) -> Result<VerificationReport> {
    let gaps: Vec<f64> = ts
        .par_iter()
        .map(|&t| Ok((u(t, delta)? - u(t, -delta)?).abs()))
        .collect::<Result<_>>()?;
    let gap = gaps.into_iter().fold(0.0f64, f64::max);
    Ok(VerificationReport::new("continuity", gap, 1e-8)
        .param("k", cfg.k)
        .param("alpha", cfg.alpha))
}

/// Decay rate of `U(t, x)` as `|x| -> inf` for compactly supported or
/// rapidly decaying Dirichlet data: `|x|^(alpha-2)`, or `|x|^-3` (the
/// `2xty` numerator term) once `alpha < -1`.
pub fn dirichlet_far_field_decay(alpha: f64) -> f64 {
    (2.0 - alpha).min(3.0)
}

/// `||U_t - g||_p` for each height in `ts`, by adaptive quadrature over the
/// line. `decay` is the algebraic decay rate of `U_t - g`; the integrand then
/// decays at rate `p * decay`, and a rate `<= 1` is reported as
/// `TailTooSlow` (the gap is not in `L_p`).
#[allow(clippy::too_many_arguments)]
pub fn trace_norm_sequence<F, G>(
    u: &F,
    g: &G,
    p: f64,
    ts: &[f64],
    decay: f64,
    breaks: &[f64],
    scheme: &PVQuadratureScheme,
) -> Result<Vec<f64>>
where
    F: Potential,
    G: Fn(f64) -> f64 + Sync,
{
    if !ts.windows(2).all(|w| w[1] < w[0]) {
        return Err(Error::DomainError("trace heights must be decreasing".into()));
    }
    let rate = p * decay;
    ts.par_iter()
        .map(|&t| {
            let failure: Mutex<Option<Error>> = Mutex::new(None);
            let integrand = |x: f64| match u(t, x) {
                Ok(v) => (v - g(x)).abs().powf(p),
                Err(e) => {
                    failure.lock().expect("poisoned").get_or_insert(e);
                    f64::NAN
                }
            };
            let plan = scheme
                .plan(End::decaying(rate), End::decaying(rate))
                .point(0.0, Feature::Smooth)
                .breaks(breaks.iter().copied());
            let r = plan.integrate(&integrand);
            if let Some(e) = failure.into_inner().expect("poisoned") {
                return Err(e);
            }
            Ok(r?.value.powf(p.recip()))
        })
        .collect()
}

/// Least-squares slope of `ln |U(t, x)|` against `ln |x|` over `xs`.
pub fn tail_exponent<F: Potential>(u: &F, t: f64, xs: &[f64]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|&x| Ok((x.abs().ln(), u(t, x)?.abs().ln())))
        .collect::<Result<_>>()?;
    Ok(fit_slope(&pts))
}

/// Whether a tail `|x|^exponent` is `p`-integrable at infinity.
pub fn tail_in_lp(exponent: f64, p: f64) -> bool {
    -exponent * p > 1.0
}

pub(crate) fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Which non-tangential maximal function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NTVariant {
    /// `N_*(U)(x0) = sup_{|x - x0| < t} |U(t, x)|`.
    Plain,
    /// `sup_{|x - x0| < t} t^-1 ||F||_{L2(Q(t,x))}`, `Q` the square of side
    /// `t` centred at `(t, x)`.
    Modified,
}

/// Non-tangential maximal function sampled at the grid abscissae.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NTMaxProfile {
    pub x0_nodes: Vec<f64>,
    pub nstar_values: Vec<f64>,
    pub variant: NTVariant,
    pub cone_aperture: f64,
    pub square_side_factor: f64,
}

impl NTMaxProfile {
    /// Trapezoidal `L_p` norm over the sampled abscissae.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let x = &self.x0_nodes;
        let v = &self.nstar_values;
        let mut s = 0.0;
        for j in 1..x.len() {
            s += 0.5 * (v[j].powf(p) + v[j - 1].powf(p)) * (x[j] - x[j - 1]);
        }
        s.powf(p.recip())
    }

    pub fn max(&self) -> f64 {
        self.nstar_values.iter().copied().fold(0.0, f64::max)
    }
}

/// Minimum number of grid nodes inside every cone.
pub const MIN_CONE_NODES: usize = 10;

/// Sample `N_*` (or its square-averaged variant) from a tabulated field.
/// Node magnitudes are Euclidean norms over the field components.
pub fn nontangential_max(grid: &FieldGrid<f64>, variant: NTVariant) -> Result<NTMaxProfile> {
    let t = &grid.t_levels;
    let x = &grid.x_nodes;
    let nx = x.len();
    let mag: Vec<f64> = (0..t.len() * nx)
        .map(|n| grid.at(n / nx, n % nx).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    let node_value: Vec<f64> = match variant {
        NTVariant::Plain => mag.clone(),
        NTVariant::Modified => (0..t.len() * nx)
            .into_par_iter()
            .map(|n| {
                let (ti, xj) = (t[n / nx], x[n % nx]);
                let r = 0.5 * ti;
                let i0 = t.partition_point(|&v| v < ti - r);
                let i1 = t.partition_point(|&v| v <= ti + r);
                let j0 = x.partition_point(|&v| v < xj - r);
                let j1 = x.partition_point(|&v| v <= xj + r);
                let mut s = 0.0;
                let mut c = 0usize;
                for i in i0..i1 {
                    for j in j0..j1 {
                        s += mag[i * nx + j].powi(2);
                        c += 1;
                    }
                }
                (s / c as f64).sqrt()
            })
            .collect(),
    };
    let values: Vec<(f64, usize)> = x
        .par_iter()
        .map(|&x0| {
            let mut sup = 0.0f64;
            let mut count = 0usize;
            for (i, &ti) in t.iter().enumerate() {
                let j0 = x.partition_point(|&v| v <= x0 - ti);
                let j1 = x.partition_point(|&v| v < x0 + ti);
                for j in j0..j1 {
                    sup = sup.max(node_value[i * nx + j]);
                    count += 1;
                }
            }
            (sup, count)
        })
        .collect();
    if let Some((j, (_, c))) = values.iter().enumerate().find(|(_, v)| v.1 < MIN_CONE_NODES) {
        return Err(Error::GridTooCoarse(format!(
            "cone at x0 = {} holds {c} nodes, need {MIN_CONE_NODES}",
            x[j]
        )));
    }
    Ok(NTMaxProfile {
        x0_nodes: x.clone(),
        nstar_values: values.into_iter().map(|v| v.0).collect(),
        variant,
        cone_aperture: 1.0,
        square_side_factor: match variant {
            NTVariant::Plain => 0.0,
            NTVariant::Modified => 1.0,
        },
    })
}

/// Energies `E(eps) = int_eps^1 int_-1^1 |grad U|^2 dx dt` and the fitted
/// growth exponent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyFit {
    pub epsilons: Vec<f64>,
    pub energies: Vec<f64>,
    /// Slope of `ln(E(eps_{j+1}) - E(eps_j))` against `ln eps_{j+1}`. For
    /// `E ~ C eps^beta` with `beta < 0` this is `beta`; a bounded energy gives
    /// a positive slope (the increments vanish). 0 when every increment is 0.
    pub exponent: f64,
}

/// Gradient by central differences, staying inside the quadrant of `x`.
fn fd_gradient_sq<F: Potential>(u: &F, t: f64, x: f64) -> Result<f64> {
    let h = 1e-3 * t.min(x.abs());
    let dt = (u(t + h, x)? - u(t - h, x)?) / (2.0 * h);
    let dx = (u(t, x + h)? - u(t, x - h)?) / (2.0 * h);
    Ok(dt * dt + dx * dx)
}

/// Panels of `(0, 1]` refined geometrically toward 0 down to `scale / 4`.
fn graded_panels(scale: f64) -> Vec<(f64, f64)> {
    let mut edges = vec![0.0];
    let mut e = scale / 4.0;
    while e < 0.125 {
        edges.push(e);
        e *= 2.0;
    }
    let mut e = 0.125;
    while e < 1.0 - 1e-12 {
        if e > *edges.last().expect("nonempty") {
            edges.push(e);
        }
        e += 0.125;
    }
    edges.push(1.0);
    edges.windows(2).map(|w| (w[0], w[1])).collect()
}

/// `int_a^b int_-1^1 |grad U|^2 dx dt` by tensor Gauss rules.
fn band_energy<F: Potential>(u: &F, a: f64, b: f64, rule: &Rule<f64>) -> Result<f64> {
    let mut t_panels = Vec::new();
    let mut lo = a;
    while lo < b {
        let hi = (2.0 * lo).min(b);
        t_panels.push((lo, hi));
        lo = hi;
    }
    let x_panels: Vec<(f64, f64)> = graded_panels(a)
        .into_iter()
        .flat_map(|(l, r)| [(l, r), (-r, -l)])
        .collect();
    let mut nodes = Vec::new();
    for &(ta, tb) in &t_panels {
        for (ti, wt) in rule.nodes.iter().zip(&rule.weights) {
            let t = 0.5 * (ta + tb) + 0.5 * (tb - ta) * ti;
            let wt = 0.5 * (tb - ta) * wt;
            for &(xa, xb) in &x_panels {
                for (xi, wx) in rule.nodes.iter().zip(&rule.weights) {
                    let x = 0.5 * (xa + xb) + 0.5 * (xb - xa) * xi;
                    nodes.push((t, x, wt * 0.5 * (xb - xa) * wx));
                }
            }
        }
    }
    let parts: Vec<f64> = nodes
        .par_iter()
        .map(|&(t, x, w)| Ok(w * fd_gradient_sq(u, t, x)?))
        .collect::<Result<_>>()?;
    let s: f64 = parts.iter().sum();
    if !s.is_finite() {
        return Err(Error::QuadratureFailure);
    }
    Ok(s)
}

/// Energy growth of `U` toward the boundary over `[-1, 1]`.
pub fn energy_scaling<F: Potential>(
    u: &F,
    cfg: &ProblemConfig,
    epsilons: &[f64],
) -> Result<(EnergyFit, VerificationReport)> {
    if epsilons.len() < 3
        || !epsilons.windows(2).all(|w| w[1] < w[0])
        || !(epsilons[epsilons.len() - 1] > 0.0)
        || !(epsilons[0] < 1.0)
    {
        return Err(Error::DomainError(
            "need at least three decreasing heights in (0, 1)".into(),
        ));
    }
    let rule = gauss_legendre::<f64>(12);
    let base = band_energy(u, epsilons[0], 1.0, &rule)?;
    let increments: Vec<f64> = epsilons
        .windows(2)
        .map(|w| band_energy(u, w[1], w[0], &rule))
        .collect::<Result<_>>()?;
    let mut energies = vec![base];
    for d in &increments {
        energies.push(energies.last().expect("nonempty") + d);
    }
    let pts: Vec<(f64, f64)> = increments
        .iter()
        .zip(&epsilons[1..])
        .filter(|(d, _)| **d > 0.0)
        .map(|(d, e)| (e.ln(), d.ln()))
        .collect();
    let exponent = if pts.len() >= 2 { fit_slope(&pts) } else { 0.0 };
    let alpha = cfg.alpha;
    let (measured, tolerance, expect) = if alpha > -1.0 {
        ((-exponent).max(0.0), 0.05, "bounded".to_string())
    } else {
        let beta = 2.0 * alpha + 2.0;
        ((exponent - beta).abs(), 0.1, format!("exponent {beta:.3}"))
    };
    let report = VerificationReport::new("energy-scaling", measured, tolerance)
        .param("k", cfg.k)
        .param("alpha", alpha)
        .note(format!("fitted exponent {exponent:.4}, expected {expect}"));
    Ok((
        EnergyFit {
            epsilons: epsilons.to_vec(),
            energies,
            exponent,
        },
        report,
    ))
}
