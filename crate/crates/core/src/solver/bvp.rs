//! The three boundary value problems, solved through their boundary
//! equations and the Cauchy extension.

use serde::{Deserialize, Serialize};

use super::field::{FieldGrid, FieldKind, GridSpec};
use super::kernel::poisson_kernel_unchecked;
use crate::config::{threshold, Branch, Problem, ProblemConfig};
use crate::error::{Error, Result};
use crate::operators::{
    cauchy_extension, half_line_combination, BoundarySample, BoundaryVectorField, HalfLineInverse,
    HalfLineProfile, LogGridSettings, OpSign, SmoothnessHint, SupportHint, INVERSION_BAND,
};
use crate::quadrature::logline::LogGridFunction;
use crate::quadrature::{Feature, PVQuadratureScheme};
use crate::scalar::Scalar;

/// How the Dirichlet potential is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum DirichletRoute {
    /// One quadrature against the closed-form Poisson kernel.
    #[default]
    Kernel,
    /// Boundary density `psi` first, then its Cauchy extension.
    Density,
}

/// Numerical settings shared by the solvers.
#[derive(Clone, Debug, Default)]
pub struct SolverOptions<T: Scalar> {
    pub scheme: PVQuadratureScheme<T>,
    pub log_grid: LogGridSettings,
    pub route: DirichletRoute,
}

/// Refuse `k` within [`INVERSION_BAND`] of the problem's critical value.
/// The Dirichlet check applies to the boundary-equation branch only; the
/// energy solution exists for every `k`.
pub fn check_threshold<T: Scalar>(problem: Problem, k: T, p: T, branch: Branch) -> Result<()> {
    if problem == Problem::Dirichlet && branch == Branch::H1Branch {
        return Ok(());
    }
    let th = threshold(problem, p)?;
    let distance = (k - th).abs();
    if distance <= T::lit(INVERSION_BAND) {
        return Err(Error::NotInvertible {
            k: k.to_f64_lossy(),
            threshold: th.to_f64_lossy(),
            distance: distance.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Validate `(k, p, branch)` for `problem` and derive the configuration.
/// The gradient problems only use `k` and `p`; their stored alpha is the
/// energy-branch value.
pub fn configure<T: Scalar>(problem: Problem, k: T, p: T, branch: Branch) -> Result<ProblemConfig<T>> {
    check_threshold(problem, k, p, branch)?;
    match problem {
        Problem::Dirichlet => ProblemConfig::derive(k, p, branch),
        _ => {
            let mut cfg = ProblemConfig::derive(k, p, Branch::H1Branch)?;
            cfg.branch = branch;
            Ok(cfg)
        }
    }
}

/// Glue per-half-line log-grid functions into boundary data on the line.
fn glue<T: Scalar>(
    plus: LogGridFunction<T>,
    minus: LogGridFunction<T>,
    breaks: Vec<T>,
) -> Result<BoundarySample<T>> {
    let lo = plus.lo_exponent.min(minus.lo_exponent).min(T::zero());
    if !(lo > -T::one()) {
        return Err(Error::NonIntegrable(lo.to_f64_lossy()));
    }
    let decay = (-plus.hi_exponent).min(-minus.hi_exponent);
    if !(decay > T::zero()) {
        return Err(Error::TailTooSlow(decay.to_f64_lossy()));
    }
    let smooth = if breaks.is_empty() {
        SmoothnessHint::Smooth
    } else {
        SmoothnessHint::PiecewiseSmooth(breaks)
    };
    BoundarySample::with_origin_exponent(
        move |y: T| {
            if y > T::zero() {
                plus.eval(y)
            } else if y < T::zero() {
                minus.eval(-y)
            } else {
                T::zero()
            }
        },
        SupportHint::AlgebraicDecay(decay),
        smooth,
        lo,
    )
}

/// `identity * f + sum coef_i K_{a_i} f` on each half-line (`K = K_0 (+) K_0`
/// in the splitting), glued back to data on the line.
pub fn half_line_map<T: Scalar>(
    f: &BoundarySample<T>,
    identity: T,
    terms: &[(T, T)],
    settings: &LogGridSettings,
) -> Result<BoundarySample<T>> {
    let terms: Vec<(T, T)> = terms.iter().copied().filter(|t| t.0 != T::zero()).collect();
    let side = |s: T| -> Result<LogGridFunction<T>> {
        let g = f.half_line(s)?;
        let profile = HalfLineProfile::of(&g);
        half_line_combination(|y| g.eval(y), &profile, identity, &terms, settings)
    };
    let breaks: Vec<T> = f.breakpoints().into_iter().filter(|b| *b != T::zero()).collect();
    glue(side(T::one())?, side(-T::one())?, breaks)
}

/// Dirichlet boundary density:
/// `psi(+-y) = 2/(1+k^2) (u(+-y) + k K_{1+alpha} u(+-.)(y))`.
pub fn psi_from_u<T: Scalar>(
    u: &BoundarySample<T>,
    cfg: &ProblemConfig<T>,
    settings: &LogGridSettings,
) -> Result<BoundarySample<T>> {
    let k = cfg.k;
    let d = T::two() / (T::one() + k * k);
    half_line_map(u, d, &[(d * k, T::one() + cfg.alpha)], settings)
}

/// Dirichlet solution `U(t, x) = int P_alpha(t, x; y) u(y) dy`.
#[derive(Clone, Debug)]
pub struct DirichletSolution<T: Scalar> {
    pub cfg: ProblemConfig<T>,
    pub u: BoundarySample<T>,
    scheme: PVQuadratureScheme<T>,
    /// Density-route data `(psi, k sgn psi)`, when that route is selected.
    density: Option<BoundaryVectorField<T>>,
}

impl<T: Scalar> DirichletSolution<T> {
    pub fn new(u: BoundarySample<T>, cfg: &ProblemConfig<T>, opts: &SolverOptions<T>) -> Result<Self> {
        check_threshold(Problem::Dirichlet, cfg.k, cfg.p, cfg.branch)?;
        let (lo, hi) = cfg.branch_interval();
        if !(cfg.alpha > lo && cfg.alpha < hi) {
            return Err(Error::BranchDegenerate {
                k: cfg.k.to_f64_lossy(),
                lo: lo.to_f64_lossy(),
                hi: hi.to_f64_lossy(),
            });
        }
        let density = match opts.route {
            DirichletRoute::Kernel => None,
            DirichletRoute::Density => {
                let psi = psi_from_u(&u, cfg, &opts.log_grid)?;
                let k = cfg.k;
                let p2 = psi.clone();
                let f1 = BoundarySample::with_origin_exponent(
                    move |y: T| k * y.sgn() * p2.eval(y),
                    psi.support(),
                    psi.smoothness().clone(),
                    psi.origin_exponent(),
                )?;
                Some(BoundaryVectorField::new(psi, f1))
            }
        };
        Ok(Self {
            cfg: *cfg,
            u,
            scheme: opts.scheme.clone(),
            density,
        })
    }

    pub fn alpha(&self) -> T {
        self.cfg.alpha
    }

    /// `U(t, x)` for `t > 0`.
    pub fn value(&self, t: T, x: T) -> Result<T> {
        if !(t > T::zero()) {
            return Err(Error::DomainError("potential evaluated at t <= 0".into()));
        }
        if let Some(h) = &self.density {
            let v = cauchy_extension(t, h, x, &self.cfg, &self.scheme)?;
            return Ok(v.0[0]);
        }
        let alpha = self.cfg.alpha;
        let u = &self.u;
        let g = |y: T| {
            if y == T::zero() {
                return T::zero();
            }
            poisson_kernel_unchecked(alpha, t, x, y) * u.eval(y)
        };
        let mut plan = u
            .plan(&self.scheme, T::two() + alpha)
            .point(T::zero(), Feature::Power(u.origin_exponent() - alpha));
        if x != T::zero() {
            plan = plan.point(x, Feature::Smooth).point(-x, Feature::Smooth);
        }
        Ok(plan.integrate(&g)?.value)
    }

    /// Tabulate `U` on a grid.
    pub fn grid(&self, spec: &GridSpec<T>) -> Result<FieldGrid<T>> {
        FieldGrid::tabulate(spec, FieldKind::Potential, |t, x| Ok(vec![self.value(t, x)?]))
    }
}

/// `U` on a grid for Dirichlet data `u`.
pub fn solve_dirichlet<T: Scalar>(
    u: &BoundarySample<T>,
    cfg: &ProblemConfig<T>,
    spec: &GridSpec<T>,
    opts: &SolverOptions<T>,
) -> Result<FieldGrid<T>> {
    DirichletSolution::new(u.clone(), cfg, opts)?.grid(spec)
}

/// Gradient solution `F = C_k^+ h` for the Neumann and regularity problems.
#[derive(Clone, Debug)]
pub struct GradientSolution<T: Scalar> {
    pub cfg: ProblemConfig<T>,
    pub problem: Problem,
    /// Boundary density `psi`.
    pub psi: BoundarySample<T>,
    /// Extended boundary field (the ansatz built from `psi`).
    pub h: BoundaryVectorField<T>,
    scheme: PVQuadratureScheme<T>,
}

impl<T: Scalar> GradientSolution<T> {
    /// Neumann data `phi`: `psi = 2 (I + kK)^{-1} phi`, `h = (psi, 0)`.
    pub fn neumann(phi: &BoundarySample<T>, cfg: &ProblemConfig<T>, opts: &SolverOptions<T>) -> Result<Self> {
        check_threshold(Problem::Neumann, cfg.k, cfg.p, cfg.branch)?;
        let psi = invert_scaled(OpSign::Plus, phi, cfg, opts)?;
        let h = BoundaryVectorField::normal(psi.clone());
        Ok(Self {
            cfg: *cfg,
            problem: Problem::Neumann,
            psi,
            h,
            scheme: opts.scheme.clone(),
        })
    }

    /// Regularity data `u'`: `sgn psi = 2 (I - kK)^{-1} (sgn u')`,
    /// `h = (-k sgn psi, psi)`.
    pub fn regularity(
        u_prime: &BoundarySample<T>,
        cfg: &ProblemConfig<T>,
        opts: &SolverOptions<T>,
    ) -> Result<Self> {
        check_threshold(Problem::Regularity, cfg.k, cfg.p, cfg.branch)?;
        // The sign factor is constant on each half-line, so it commutes with
        // the per-half-line inverse.
        let psi = invert_scaled(OpSign::Minus, u_prime, cfg, opts)?;
        let k = cfg.k;
        let p2 = psi.clone();
        let f0 = BoundarySample::with_origin_exponent(
            move |y: T| -k * y.sgn() * p2.eval(y),
            psi.support(),
            psi.smoothness().clone(),
            psi.origin_exponent(),
        )?;
        let h = BoundaryVectorField::new(f0, psi.clone());
        Ok(Self {
            cfg: *cfg,
            problem: Problem::Regularity,
            psi,
            h,
            scheme: opts.scheme.clone(),
        })
    }

    /// `F(t, x) = (F0, F1)`.
    pub fn value(&self, t: T, x: T) -> Result<[T; 2]> {
        Ok(cauchy_extension(t, &self.h, x, &self.cfg, &self.scheme)?.0)
    }

    pub fn grid(&self, spec: &GridSpec<T>) -> Result<FieldGrid<T>> {
        FieldGrid::tabulate(spec, FieldKind::Gradient, |t, x| Ok(self.value(t, x)?.to_vec()))
    }

    /// The boundary quantity the problem prescribes, computed from a field
    /// value at `x`: `F0 + k sgn(x) F1` (Neumann) or `F1` (regularity).
    pub fn prescribed(&self, f: [T; 2], x: T) -> T {
        match self.problem {
            Problem::Neumann => f[0] + self.cfg.k * x.sgn() * f[1],
            _ => f[1],
        }
    }
}

/// `2 (I -+ k K_0)^{-1}` on each half-line.
fn invert_scaled<T: Scalar>(
    sign: OpSign,
    f: &BoundarySample<T>,
    cfg: &ProblemConfig<T>,
    opts: &SolverOptions<T>,
) -> Result<BoundarySample<T>> {
    let inv = HalfLineInverse::new(sign, cfg.k, cfg.p)?;
    let (id, [(c, a)]) = inv.terms();
    half_line_map(f, id * T::two(), &[(c * T::two(), a)], &opts.log_grid)
}

pub fn solve_neumann<T: Scalar>(
    phi: &BoundarySample<T>,
    cfg: &ProblemConfig<T>,
    spec: &GridSpec<T>,
    opts: &SolverOptions<T>,
) -> Result<FieldGrid<T>> {
    GradientSolution::neumann(phi, cfg, opts)?.grid(spec)
}

pub fn solve_regularity<T: Scalar>(
    u_prime: &BoundarySample<T>,
    cfg: &ProblemConfig<T>,
    spec: &GridSpec<T>,
    opts: &SolverOptions<T>,
) -> Result<FieldGrid<T>> {
    GradientSolution::regularity(u_prime, cfg, opts)?.grid(spec)
}
