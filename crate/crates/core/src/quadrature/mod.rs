//! Numerical integration engines.
//!
//! * [`PVQuadratureScheme`] holds the panel rule and the excision, grading and
//!   truncation parameters.
//! * [`Plan`] integrates over an interval or (half-)line split at
//!   [`Feature`] points: integrable power singularities get a geometrically
//!   graded mesh with a power-substituted innermost panel, simple poles are
//!   integrated in principal value by symmetric excision and Richardson
//!   extrapolation, and infinite ends use geometric tail panels with an
//!   algebraic remainder correction.
//! * [`logline`] realizes Fourier multipliers on the log-line, which is how the
//!   dilation-invariant half-line operators are diagonalized.

pub mod logline;
mod plan;
mod rules;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{QuadValue, Scalar};

pub use plan::{End, Estimate, Feature, Plan};
pub use rules::{clenshaw_curtis_open, gauss_legendre, Rule};

/// Panel rule family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PanelRule {
    GaussLegendre,
    /// Open (Fejer-type) Clenshaw-Curtis rule: Chebyshev nodes of the first kind.
    ClenshawCurtis,
}

/// Plain, serializable quadrature settings (the config-file form).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SchemeSettings {
    pub excision_radii: Vec<f64>,
    pub extrapolation_order: usize,
    pub panel_rule: PanelRule,
    pub points_per_panel: usize,
    pub grading_exponent: f64,
    pub truncation_radius: f64,
    pub tail_exponent_hint: f64,
}

impl Default for SchemeSettings {
    fn default() -> Self {
        Self {
            excision_radii: (0..6).map(|j| 0.1 * 0.5f64.powi(j)).collect(),
            extrapolation_order: 4,
            panel_rule: PanelRule::GaussLegendre,
            points_per_panel: 16,
            grading_exponent: 3.0,
            truncation_radius: 50.0,
            tail_exponent_hint: 2.0,
        }
    }
}

/// Principal-value and endpoint-singularity quadrature configuration.
///
/// The grading exponent `g` sets the geometric mesh ratio `1/(1+g)`: panel
/// widths shrink by that factor toward every graded endpoint.
#[derive(Clone, Debug)]
pub struct PVQuadratureScheme<T> {
    excision_radii: Vec<T>,
    extrapolation_order: usize,
    panel_rule: PanelRule,
    points_per_panel: usize,
    grading_exponent: T,
    truncation_radius: T,
    tail_exponent_hint: T,
    rule: Arc<Rule<T>>,
}

impl<T: Scalar> Default for PVQuadratureScheme<T> {
    fn default() -> Self {
        Self::from_settings(&SchemeSettings::default()).expect("default scheme is valid")
    }
}

impl<T: Scalar> PVQuadratureScheme<T> {
    pub fn from_settings(s: &SchemeSettings) -> Result<Self> {
        let radii: Vec<T> = s.excision_radii.iter().map(|&r| T::lit(r)).collect();
        if s.extrapolation_order < 1 {
            return Err(Error::InvalidScheme("extrapolation_order must be >= 1".into()));
        }
        if radii.len() < s.extrapolation_order + 1 {
            return Err(Error::InvalidScheme(format!(
                "need at least {} excision radii for extrapolation order {}",
                s.extrapolation_order + 1,
                s.extrapolation_order
            )));
        }
        if radii.iter().any(|r| !(*r > T::zero()))
            || radii.windows(2).any(|w| !(w[1] < w[0]))
        {
            return Err(Error::InvalidScheme(
                "excision radii must be positive and strictly decreasing".into(),
            ));
        }
        if s.points_per_panel < 4 {
            return Err(Error::InvalidScheme("points_per_panel must be >= 4".into()));
        }
        if !(s.grading_exponent >= 1.0) {
            return Err(Error::InvalidScheme("grading_exponent must be >= 1".into()));
        }
        if !(s.truncation_radius > 0.0) {
            return Err(Error::InvalidScheme("truncation_radius must be positive".into()));
        }
        let rule = match s.panel_rule {
            PanelRule::GaussLegendre => gauss_legendre(s.points_per_panel),
            PanelRule::ClenshawCurtis => clenshaw_curtis_open(s.points_per_panel),
        };
        Ok(Self {
            excision_radii: radii,
            extrapolation_order: s.extrapolation_order,
            panel_rule: s.panel_rule,
            points_per_panel: s.points_per_panel,
            grading_exponent: T::lit(s.grading_exponent),
            truncation_radius: T::lit(s.truncation_radius),
            tail_exponent_hint: T::lit(s.tail_exponent_hint),
            rule: Arc::new(rule),
        })
    }

    pub fn settings(&self) -> SchemeSettings {
        SchemeSettings {
            excision_radii: self.excision_radii.iter().map(|r| r.to_f64_lossy()).collect(),
            extrapolation_order: self.extrapolation_order,
            panel_rule: self.panel_rule,
            points_per_panel: self.points_per_panel,
            grading_exponent: self.grading_exponent.to_f64_lossy(),
            truncation_radius: self.truncation_radius.to_f64_lossy(),
            tail_exponent_hint: self.tail_exponent_hint.to_f64_lossy(),
        }
    }

    pub fn excision_radii(&self) -> &[T] {
        &self.excision_radii
    }

    pub fn extrapolation_order(&self) -> usize {
        self.extrapolation_order
    }

    pub fn panel_rule(&self) -> PanelRule {
        self.panel_rule
    }

    pub fn points_per_panel(&self) -> usize {
        self.points_per_panel
    }

    pub fn grading_exponent(&self) -> T {
        self.grading_exponent
    }

    pub fn truncation_radius(&self) -> T {
        self.truncation_radius
    }

    pub fn tail_exponent_hint(&self) -> T {
        self.tail_exponent_hint
    }

    pub fn rule(&self) -> &Rule<T> {
        &self.rule
    }

    /// Geometric mesh ratio toward graded endpoints.
    pub fn grading_ratio(&self) -> T {
        (T::one() + self.grading_exponent).recip()
    }

    /// Start an integration plan over `[lo, hi]`.
    pub fn plan(&self, lo: End<T>, hi: End<T>) -> Plan<'_, T> {
        Plan::new(self, lo, hi)
    }
}

/// Principal value of `f` over `[a, b]` with a simple pole at `x0`.
pub fn pv_integral<T, V, F>(
    f: F,
    x0: T,
    a: T,
    b: T,
    scheme: &PVQuadratureScheme<T>,
) -> Result<Estimate<V, T>>
where
    T: Scalar,
    V: QuadValue<T>,
    F: Fn(T) -> V + Sync,
{
    if x0 <= a || x0 >= b {
        if x0 == a || x0 == b {
            return Err(Error::SingularityOnBoundary(x0.to_f64_lossy()));
        }
        return scheme.plan(End::at(a), End::at(b)).integrate(&f);
    }
    scheme
        .plan(End::at(a), End::at(b))
        .point(x0, Feature::Pole)
        .integrate(&f)
}

/// Integral of `f` over `[a, b]` (or `[a, inf)` when `b` is infinite) where
/// `f ~ c |y - endpoint|^power` near `endpoint in {a, b}`.
pub fn graded_integral<T, V, F>(
    f: F,
    endpoint: T,
    power: T,
    a: T,
    b: T,
    scheme: &PVQuadratureScheme<T>,
) -> Result<Estimate<V, T>>
where
    T: Scalar,
    V: QuadValue<T>,
    F: Fn(T) -> V + Sync,
{
    if !(power > -T::one()) {
        return Err(Error::NonIntegrable(power.to_f64_lossy()));
    }
    let feature = Feature::Power(power);
    let lo = if endpoint == a {
        End::At(a, feature)
    } else {
        End::at(a)
    };
    let hi = if b.is_infinite() {
        End::Infinity(None)
    } else if endpoint == b {
        End::At(b, feature)
    } else {
        End::at(b)
    };
    if endpoint != a && endpoint != b {
        return Err(Error::DomainError(
            "graded endpoint must be one of the interval ends".into(),
        ));
    }
    scheme.plan(lo, hi).integrate(&f)
}

/// Integral of `f` over `[start, inf)`, splitting at the truncation radius
/// and correcting the algebraic tail with decay rate `decay` (the scheme's
/// hint when `None`). `start_power` declares an endpoint singularity.
pub fn halfline_tail_integral<T, V, F>(
    f: F,
    start: T,
    start_power: Option<T>,
    decay: Option<T>,
    scheme: &PVQuadratureScheme<T>,
) -> Result<Estimate<V, T>>
where
    T: Scalar,
    V: QuadValue<T>,
    F: Fn(T) -> V + Sync,
{
    let lo = match start_power {
        Some(pw) => End::At(start, Feature::Power(pw)),
        None => End::at(start),
    };
    scheme.plan(lo, End::Infinity(decay)).integrate(&f)
}
