use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{End, Feature, PVQuadratureScheme, Plan};
use crate::scalar::Scalar;

/// Decay class of boundary data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SupportHint<T> {
    /// Supported in `[a, b]`.
    Compact(T, T),
    /// `|f(y)| ~ |y|^-rate` for large `|y|`.
    AlgebraicDecay(T),
    /// Faster than any power.
    ExponentialDecay,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SmoothnessHint<T> {
    Smooth,
    /// Jumps or kinks at the listed points.
    PiecewiseSmooth(Vec<T>),
}

/// Decay rate used for "faster than any power" tails.
pub(crate) const FAST_DECAY: f64 = 40.0;

type Evaluator<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// A real boundary function on the line with decay and smoothness metadata,
/// plus cached samples on a graded grid that avoids `0` and every declared
/// breakpoint.
#[derive(Clone)]
pub struct BoundarySample<T> {
    evaluator: Evaluator<T>,
    support: SupportHint<T>,
    smoothness: SmoothnessHint<T>,
    /// Behaviour `|f(y)| ~ |y|^lo_exponent` near `y = 0` (0 for data that is
    /// regular there).
    lo_exponent: T,
    nodes: Vec<T>,
    samples: Vec<T>,
    /// Identically zero placeholder; ignored when planning integrals.
    vanishing: bool,
}

impl<T: Scalar> fmt::Debug for BoundarySample<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundarySample")
            .field("support", &self.support)
            .field("smoothness", &self.smoothness)
            .field("lo_exponent", &self.lo_exponent)
            .field("nodes", &self.nodes.len())
            .finish()
    }
}

impl<T: Scalar> BoundarySample<T> {
    pub fn new<F>(f: F, support: SupportHint<T>, smoothness: SmoothnessHint<T>) -> Result<Self>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self::with_origin_exponent(f, support, smoothness, T::zero())
    }

    /// Data with a declared power behaviour `|y|^lo_exponent` at the origin.
    pub fn with_origin_exponent<F>(
        f: F,
        support: SupportHint<T>,
        smoothness: SmoothnessHint<T>,
        lo_exponent: T,
    ) -> Result<Self>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        if let SupportHint::Compact(a, b) = support {
            if !(b > a) {
                return Err(Error::DomainError("empty support interval".into()));
            }
        }
        if let SupportHint::AlgebraicDecay(r) = support {
            if !(r > T::zero()) {
                return Err(Error::DomainError("decay rate must be positive".into()));
            }
        }
        if !(lo_exponent > -T::one()) {
            return Err(Error::NonIntegrable(lo_exponent.to_f64_lossy()));
        }
        let mut out = Self {
            evaluator: Arc::new(f),
            support,
            smoothness,
            lo_exponent,
            nodes: Vec::new(),
            samples: Vec::new(),
            vanishing: false,
        };
        out.nodes = out.graded_nodes();
        out.samples = out.nodes.iter().map(|&y| out.eval(y)).collect();
        if let Some(i) = out.samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::DomainError(format!(
                "boundary data not finite at y = {}",
                out.nodes[i]
            )));
        }
        Ok(out)
    }

    /// Smooth data without support restriction, decaying faster than any power.
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self::new(f, SupportHint::ExponentialDecay, SmoothnessHint::Smooth)
            .expect("exponential-decay data with default metadata")
    }

    /// The zero function.
    pub fn zero() -> Self {
        let mut z = Self::new(
            |_| T::zero(),
            SupportHint::Compact(-T::one(), T::one()),
            SmoothnessHint::Smooth,
        )
        .expect("zero data");
        z.vanishing = true;
        z
    }

    pub fn is_zero(&self) -> bool {
        self.vanishing
    }

    #[inline]
    pub fn eval(&self, y: T) -> T {
        if self.vanishing {
            return T::zero();
        }
        if let SupportHint::Compact(a, b) = self.support {
            if y < a || y > b {
                return T::zero();
            }
        }
        (self.evaluator)(y)
    }

    pub fn support(&self) -> SupportHint<T> {
        self.support
    }

    pub fn smoothness(&self) -> &SmoothnessHint<T> {
        &self.smoothness
    }

    pub fn origin_exponent(&self) -> T {
        self.lo_exponent
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    /// Declared breakpoints plus the support ends.
    pub fn breakpoints(&self) -> Vec<T> {
        let mut b = match &self.smoothness {
            SmoothnessHint::Smooth => Vec::new(),
            SmoothnessHint::PiecewiseSmooth(v) => v.clone(),
        };
        if let SupportHint::Compact(a, c) = self.support {
            b.push(a);
            b.push(c);
        }
        b
    }

    /// Scale beyond which the data is negligible (or algebraically decaying).
    pub fn extent(&self) -> T {
        match self.support {
            SupportHint::Compact(a, b) => a.abs().max(b.abs()),
            _ => {
                let peak = self.samples.iter().fold(T::zero(), |m, v| m.max(v.abs()));
                let cut = peak * T::lit(1e-17);
                self.nodes
                    .iter()
                    .zip(&self.samples)
                    .filter(|(_, v)| v.abs() > cut)
                    .fold(T::one(), |m, (y, _)| m.max(y.abs()))
            }
        }
    }

    /// Decay rate of the data at infinity (`None`: compact support).
    pub fn decay_rate(&self) -> Option<T> {
        match self.support {
            SupportHint::Compact(..) => None,
            SupportHint::AlgebraicDecay(r) => Some(r),
            SupportHint::ExponentialDecay => Some(T::lit(FAST_DECAY)),
        }
    }

    /// Integration plan over the data's domain for an integrand that is the
    /// data times a kernel decaying like `|y|^-kernel_decay`. Breakpoints of
    /// the data are added; callers add kernel features.
    pub fn plan<'s>(&self, scheme: &'s PVQuadratureScheme<T>, kernel_decay: T) -> Plan<'s, T> {
        let (lo, hi) = match self.support {
            SupportHint::Compact(a, b) => (End::at(a), End::at(b)),
            _ => {
                let rate = self.decay_rate().expect("non-compact") + kernel_decay;
                (End::decaying(rate), End::decaying(rate))
            }
        };
        let plan = scheme.plan(lo, hi).breaks(self.breakpoints());
        if self.lo_exponent != T::zero() {
            plan.point(T::zero(), Feature::Power(self.lo_exponent))
        } else {
            plan
        }
    }

    /// Restriction to one half-line, as a function on `(0, inf)`:
    /// `y -> f(side * y)`.
    pub fn half_line(&self, side: T) -> Result<Self> {
        let side = side.sgn();
        let me = self.clone();
        let support = match self.support {
            SupportHint::Compact(a, b) => {
                let (lo, hi) = if side > T::zero() { (a, b) } else { (-b, -a) };
                if hi <= T::zero() {
                    // Nothing on this side: an empty compact piece near 1.
                    SupportHint::Compact(T::one(), T::two())
                } else {
                    SupportHint::Compact(lo.max(T::zero()), hi)
                }
            }
            s => s,
        };
        let empty = matches!(self.support, SupportHint::Compact(a, b)
            if (side > T::zero() && b <= T::zero()) || (side < T::zero() && a >= T::zero()));
        let smooth = match &self.smoothness {
            SmoothnessHint::Smooth => SmoothnessHint::Smooth,
            SmoothnessHint::PiecewiseSmooth(v) => SmoothnessHint::PiecewiseSmooth(
                v.iter()
                    .map(|&b| b * side)
                    .filter(|&b| b > T::zero())
                    .collect(),
            ),
        };
        Self::with_origin_exponent(
            move |y| if empty { T::zero() } else { me.eval(side * y) },
            support,
            smooth,
            self.lo_exponent,
        )
    }

    /// Dilated data `y -> f(lambda y)`, `lambda > 0`.
    pub fn dilate(&self, lambda: T) -> Result<Self> {
        let me = self.clone();
        let support = match self.support {
            SupportHint::Compact(a, b) => SupportHint::Compact(a / lambda, b / lambda),
            s => s,
        };
        let smooth = match &self.smoothness {
            SmoothnessHint::Smooth => SmoothnessHint::Smooth,
            SmoothnessHint::PiecewiseSmooth(v) => {
                SmoothnessHint::PiecewiseSmooth(v.iter().map(|&b| b / lambda).collect())
            }
        };
        Self::with_origin_exponent(move |y| me.eval(lambda * y), support, smooth, self.lo_exponent)
    }

    /// `L_p` norm by quadrature.
    pub fn lp_norm(&self, p: T, scheme: &PVQuadratureScheme<T>) -> Result<T> {
        let f = |y: T| self.eval(y).abs().powf(p);
        let plan = self.plan(scheme, T::zero()).point(T::zero(), Feature::Smooth);
        Ok(plan.integrate(&f)?.value.powf(p.recip()))
    }

    fn graded_nodes(&self) -> Vec<T> {
        let ext = match self.support {
            SupportHint::Compact(a, b) => a.abs().max(b.abs()),
            SupportHint::AlgebraicDecay(_) => T::lit(100.0),
            SupportHint::ExponentialDecay => T::lit(30.0),
        };
        // Geometric grid toward the origin, uniform further out.
        let n_geo = 24;
        let n_uni = 200;
        let h = ext / T::from_usize(n_uni).expect("size");
        let mut pos = Vec::with_capacity(n_geo + n_uni);
        let mut y = h * T::lit(0.5);
        for _ in 0..n_geo {
            y = y * T::half();
        }
        for _ in 0..n_geo {
            y = y * T::two();
            pos.push(y);
        }
        for j in 1..=n_uni {
            pos.push(h * (T::from_usize(j).expect("index") - T::lit(0.5)) + h * T::half());
        }
        let breaks = self.breakpoints();
        let shift = h * T::lit(0.25);
        let mut nodes: Vec<T> = pos
            .iter()
            .rev()
            .map(|&y| -y)
            .chain(pos.iter().copied())
            .map(|y| {
                if breaks.iter().any(|&b| b == y) {
                    y + shift
                } else {
                    y
                }
            })
            .collect();
        nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        nodes
    }
}

/// A boundary vector field `f0 e0 + f1 e1`.
#[derive(Clone, Debug)]
pub struct BoundaryVectorField<T: Scalar> {
    pub f0: BoundarySample<T>,
    pub f1: BoundarySample<T>,
}

impl<T: Scalar> BoundaryVectorField<T> {
    pub fn new(f0: BoundarySample<T>, f1: BoundarySample<T>) -> Self {
        Self { f0, f1 }
    }

    /// The zero field.
    pub fn zero() -> Self {
        Self::new(BoundarySample::zero(), BoundarySample::zero())
    }

    /// Field with only a normal (`e0`) component.
    pub fn normal(f0: BoundarySample<T>) -> Self {
        Self::new(f0, Self::zero().f1)
    }

    /// Field with only a tangential (`e1`) component.
    pub fn tangential(f1: BoundarySample<T>) -> Self {
        Self::new(Self::zero().f0, f1)
    }

    #[inline]
    pub fn eval(&self, y: T) -> [T; 2] {
        [self.f0.eval(y), self.f1.eval(y)]
    }

    /// Integration plan covering both components.
    pub fn plan<'s>(&self, scheme: &'s PVQuadratureScheme<T>, kernel_decay: T) -> Plan<'s, T> {
        match (self.f0.is_zero(), self.f1.is_zero()) {
            (false, true) => return self.f0.plan(scheme, kernel_decay),
            (true, false) => return self.f1.plan(scheme, kernel_decay),
            _ => {}
        }
        let (lo, hi) = self.domain(kernel_decay);
        let mut breaks = self.f0.breakpoints();
        breaks.extend(self.f1.breakpoints());
        let mut plan = scheme.plan(lo, hi).breaks(breaks);
        let e = self.f0.origin_exponent().min(self.f1.origin_exponent());
        if e != T::zero() {
            plan = plan.point(T::zero(), Feature::Power(e));
        }
        plan
    }

    fn domain(&self, kernel_decay: T) -> (End<T>, End<T>) {
        use SupportHint::*;
        match (self.f0.support(), self.f1.support()) {
            (Compact(a0, b0), Compact(a1, b1)) => {
                (End::at(a0.min(a1)), End::at(b0.max(b1)))
            }
            _ => {
                let r0 = self.f0.decay_rate().unwrap_or(T::lit(FAST_DECAY));
                let r1 = self.f1.decay_rate().unwrap_or(T::lit(FAST_DECAY));
                let rate = r0.min(r1) + kernel_decay;
                (End::decaying(rate), End::decaying(rate))
            }
        }
    }

    pub fn extent(&self) -> T {
        match (self.f0.is_zero(), self.f1.is_zero()) {
            (false, true) => self.f0.extent(),
            (true, false) => self.f1.extent(),
            _ => self.f0.extent().max(self.f1.extent()),
        }
    }
}
