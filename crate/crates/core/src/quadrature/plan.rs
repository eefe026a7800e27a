use crate::error::{Error, Result};
use crate::scalar::{QuadValue, Scalar};

use super::PVQuadratureScheme;

/// Local behaviour of an integrand at a breakpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Feature<T> {
    /// Smooth on each side (jumps, kinks and sharp peaks are all fine).
    Smooth,
    /// `f ~ c |y - y0|^power` with `power > -1`.
    Power(T),
    /// Simple pole, integrated in the principal-value sense.
    Pole,
}

/// One end of the integration domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum End<T> {
    At(T, Feature<T>),
    /// Infinite end with algebraic decay `|f| ~ |y|^-decay`; `None` uses the
    /// scheme's tail hint.
    Infinity(Option<T>),
}

impl<T: Scalar> End<T> {
    pub fn at(x: T) -> Self {
        End::At(x, Feature::Smooth)
    }

    pub fn singular(x: T, power: T) -> Self {
        End::At(x, Feature::Power(power))
    }

    pub fn infinite() -> Self {
        End::Infinity(None)
    }

    pub fn decaying(rate: T) -> Self {
        End::Infinity(Some(rate))
    }
}

/// Integral value with an error estimate. The estimate covers the
/// extrapolated principal-value parts; panel sums are assumed converged.
#[derive(Clone, Copy, Debug)]
pub struct Estimate<V, T> {
    pub value: V,
    pub error: T,
}

/// Integration request: a domain plus interior feature points.
pub struct Plan<'s, T> {
    scheme: &'s PVQuadratureScheme<T>,
    lo: End<T>,
    hi: End<T>,
    points: Vec<(T, Feature<T>)>,
}

impl<'s, T: Scalar> Plan<'s, T> {
    pub(super) fn new(scheme: &'s PVQuadratureScheme<T>, lo: End<T>, hi: End<T>) -> Self {
        Self {
            scheme,
            lo,
            hi,
            points: Vec::new(),
        }
    }

    /// Add a feature point. Points outside the open domain are ignored, except
    /// poles on a finite end, which are rejected at integration time.
    pub fn point(mut self, at: T, feature: Feature<T>) -> Self {
        self.points.push((at, feature));
        self
    }

    /// Add several smooth breakpoints (jumps, kinks, peaks).
    pub fn breaks(mut self, at: impl IntoIterator<Item = T>) -> Self {
        for x in at {
            self.points.push((x, Feature::Smooth));
        }
        self
    }

    pub fn integrate<V, F>(&self, f: &F) -> Result<Estimate<V, T>>
    where
        V: QuadValue<T>,
        F: Fn(T) -> V + Sync + ?Sized,
    {
        let (anchors, lo_tail, hi_tail) = self.anchors()?;
        let mut total = V::zero();
        let mut error = T::zero();

        // Replace poles by fold intervals.
        let mut nodes: Vec<(T, Feature<T>)> = Vec::with_capacity(anchors.len() + 4);
        // Windows (by left node index) already covered by a fold.
        let mut folded: Vec<usize> = Vec::new();
        for (i, &(x, kind)) in anchors.iter().enumerate() {
            if kind != Feature::Pole {
                nodes.push((x, kind));
                continue;
            }
            let left = if i > 0 {
                x - anchors[i - 1].0
            } else {
                T::infinity()
            };
            let right = if i + 1 < anchors.len() {
                anchors[i + 1].0 - x
            } else {
                T::infinity()
            };
            let gap = left.min(right);
            let r = if gap.is_finite() {
                gap * T::half()
            } else {
                x.abs().max(T::one())
            };
            let pv = self.principal_value(f, x, r)?;
            total = total + pv.value;
            error = error + pv.error;
            folded.push(nodes.len());
            nodes.push((x - r, Feature::Smooth));
            nodes.push((x + r, Feature::Smooth));
        }

        for (i, w) in nodes.windows(2).enumerate() {
            let (a, ka) = w[0];
            let (b, kb) = w[1];
            if b > a && !folded.contains(&i) {
                total = total + self.segment(f, a, ka, b, kb);
            }
        }

        let radius = self.scheme.truncation_radius();
        if let Some(decay) = lo_tail {
            let (n0, k0) = nodes[0];
            let start = n0 - radius.max(n0.abs());
            total = total + self.segment(f, start, Feature::Smooth, n0, k0);
            total = total + self.tail(f, start, n0, decay)?;
        }
        if let Some(decay) = hi_tail {
            let (n1, k1) = *nodes.last().expect("at least one node");
            let start = n1 + radius.max(n1.abs());
            total = total + self.segment(f, n1, k1, start, Feature::Smooth);
            total = total + self.tail(f, start, n1, decay)?;
        }

        if !total.is_finite_value() || !error.is_finite() {
            return Err(Error::QuadratureFailure);
        }
        Ok(Estimate {
            value: total,
            error,
        })
    }

    /// Sorted anchor points (finite ends plus interior features) and the
    /// decay rates of the infinite ends.
    #[allow(clippy::type_complexity)]
    fn anchors(&self) -> Result<(Vec<(T, Feature<T>)>, Option<T>, Option<T>)> {
        let tail_rate = |d: Option<T>| -> Result<T> {
            let rate = d.unwrap_or(self.scheme.tail_exponent_hint());
            if !(rate > T::one()) {
                return Err(Error::TailTooSlow(rate.to_f64_lossy()));
            }
            Ok(rate)
        };
        let mut anchors = Vec::new();
        let (lo_x, lo_tail) = match self.lo {
            End::At(x, kind) => {
                check_feature(kind)?;
                if kind == Feature::Pole {
                    return Err(Error::SingularityOnBoundary(x.to_f64_lossy()));
                }
                anchors.push((x, kind));
                (x, None)
            }
            End::Infinity(d) => (T::neg_infinity(), Some(tail_rate(d)?)),
        };
        let (hi_x, hi_tail) = match self.hi {
            End::At(x, kind) => {
                check_feature(kind)?;
                if kind == Feature::Pole {
                    return Err(Error::SingularityOnBoundary(x.to_f64_lossy()));
                }
                (x, None)
            }
            End::Infinity(d) => (T::infinity(), Some(tail_rate(d)?)),
        };
        if !(hi_x > lo_x) {
            return Err(Error::DomainError("empty integration domain".into()));
        }
        for &(x, kind) in &self.points {
            check_feature(kind)?;
            if kind == Feature::Pole && (x == lo_x || x == hi_x) {
                return Err(Error::SingularityOnBoundary(x.to_f64_lossy()));
            }
            if x > lo_x && x < hi_x {
                anchors.push((x, kind));
            }
        }
        if let End::At(x, kind) = self.hi {
            anchors.push((x, kind));
        }
        anchors.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite breakpoints"));
        // Merge coincident points keeping the most singular description.
        let mut merged: Vec<(T, Feature<T>)> = Vec::with_capacity(anchors.len());
        for (x, kind) in anchors {
            if let Some(last) = merged.last_mut() {
                if last.0 == x {
                    last.1 = stronger(last.1, kind)?;
                    continue;
                }
            }
            merged.push((x, kind));
        }
        if merged.is_empty() {
            merged.push((T::zero(), Feature::Smooth));
        }
        Ok((merged, lo_tail, hi_tail))
    }

    /// Depth target for geometric grading.
    fn grading_floor(&self) -> T {
        T::epsilon().sqrt() * T::lit(1e-2)
    }

    /// Integral over `[a, b]`, graded toward both ends.
    fn segment<V, F>(&self, f: &F, a: T, ka: Feature<T>, b: T, kb: Feature<T>) -> V
    where
        V: QuadValue<T>,
        F: Fn(T) -> V + Sync + ?Sized,
    {
        let mid = (a + b) * T::half();
        let left = self.graded_half(f, a, mid - a, ka);
        let right = self.graded_half(f, b, mid - b, kb);
        left - right
    }

    /// Oriented integral from `e` to `e + d`, graded toward `e`.
    fn graded_half<V, F>(&self, f: &F, e: T, d: T, kind: Feature<T>) -> V
    where
        V: QuadValue<T>,
        F: Fn(T) -> V + Sync + ?Sized,
    {
        let rule = self.scheme.rule();
        let ratio = self.scheme.grading_ratio();
        let floor = self.grading_floor();
        let mut acc = V::zero();
        let mut outer = T::one();
        while outer > floor {
            let inner = outer * ratio;
            acc = acc + rule.apply(e + d * inner, e + d * outer, f);
            outer = inner;
        }
        let delta = d * outer;
        let inner_panel = match kind {
            Feature::Power(beta) if beta != T::zero() => {
                // y = e + delta w^m, m = 1/(1+beta): exact for pure power laws.
                let m = (T::one() + beta).recip();
                let g = |w: T| f(e + delta * w.powf(m)) * (m * w.powf(m - T::one()));
                rule.apply(T::zero(), T::one(), &g) * delta
            }
            _ => rule.apply(e, e + delta, f),
        };
        acc + inner_panel
    }

    /// Oriented tail integral beyond `start`, away from `origin`.
    fn tail<V, F>(&self, f: &F, start: T, origin: T, decay: T) -> Result<V>
    where
        V: QuadValue<T>,
        F: Fn(T) -> V + Sync + ?Sized,
    {
        let rule = self.scheme.rule();
        let growth = T::one() + self.scheme.grading_exponent();
        let target = self.grading_floor() * self.grading_floor();
        let d0 = start - origin;
        let sign = if d0 > T::zero() { T::one() } else { -T::one() };
        let mut acc = V::zero();
        let mut dist = d0.abs();
        let mut decayed = T::one();
        let shrink = growth.powf(T::one() - decay);
        let ceiling = T::max_value().powf(T::lit(0.1));
        while decayed > target && dist < ceiling {
            let next = dist * growth;
            acc = acc + rule.apply(origin + sign * dist, origin + sign * next, f);
            dist = next;
            decayed = decayed * shrink;
        }
        // Remainder for f ~ C |y - origin|^-decay.
        let end = origin + sign * dist;
        let remainder = f(end) * (dist / (decay - T::one()));
        Ok(if sign > T::zero() {
            acc + remainder
        } else {
            // Oriented from -inf to start.
            acc * -T::one() + remainder
        })
    }

    /// Principal value over `[x0 - r, x0 + r]` by symmetric excision and
    /// Richardson extrapolation in the excision radius.
    fn principal_value<V, F>(&self, f: &F, x0: T, r: T) -> Result<Estimate<V, T>>
    where
        V: QuadValue<T>,
        F: Fn(T) -> V + Sync + ?Sized,
    {
        let fold = |s: T| f(x0 + s) + f(x0 - s);
        let radii = self.scheme.excision_radii();
        let scale = (r * T::half() / radii[0]).min(T::one());
        let eps: Vec<T> = radii.iter().map(|&e| e * scale).collect();
        let rule = self.scheme.rule();

        let mut values: Vec<V> = Vec::with_capacity(eps.len());
        let mut running = self.segment(&fold, eps[0], Feature::Smooth, r, Feature::Smooth);
        values.push(running);
        for w in eps.windows(2) {
            running = running + rule.apply(w[1], w[0], &fold);
            values.push(running);
        }
        // Residue scale of the pole, so that exactly cancelling folds are not
        // mistaken for divergence.
        let e_min = eps[eps.len() - 1];
        let residue = f(x0 + e_min).magnitude().max(f(x0 - e_min).magnitude()) * e_min;
        extrapolate_to_zero(&eps, &values, self.scheme.extrapolation_order(), residue)
    }
}

fn check_feature<T: Scalar>(kind: Feature<T>) -> Result<()> {
    if let Feature::Power(beta) = kind {
        if !(beta > -T::one()) {
            return Err(Error::NonIntegrable(beta.to_f64_lossy()));
        }
    }
    Ok(())
}

fn stronger<T: Scalar>(a: Feature<T>, b: Feature<T>) -> Result<Feature<T>> {
    use Feature::*;
    Ok(match (a, b) {
        (Pole, Power(_)) | (Power(_), Pole) => {
            return Err(Error::DomainError(
                "pole coinciding with a power singularity".into(),
            ))
        }
        (Pole, _) | (_, Pole) => Pole,
        (Power(x), Power(y)) => Power(x.min(y)),
        (Power(x), Smooth) | (Smooth, Power(x)) => Power(x),
        (Smooth, Smooth) => Smooth,
    })
}

/// Extrapolation of `values(eps)` to `eps = 0`. The excised part of a
/// simple-pole principal value is `int_0^eps F(s) ds` with `F` even, so the
/// expansion only contains odd powers: the fit basis is
/// `1, eps, eps^3, ..., eps^(2 order - 1)`. The error estimate compares the fit
/// on the last `order + 1` radii with the fit on the window one radius earlier.
pub(crate) fn extrapolate_to_zero<T: Scalar, V: QuadValue<T>>(
    eps: &[T],
    values: &[V],
    order: usize,
    scale: T,
) -> Result<Estimate<V, T>> {
    let m = values.len();
    let order = order.min(m - 1);
    let best = fit_at_zero(&eps[m - order - 1..], &values[m - order - 1..]);
    let previous = if m >= order + 2 {
        fit_at_zero(&eps[m - order - 2..m - 1], &values[m - order - 2..m - 1])
    } else {
        fit_at_zero(&eps[m - order..], &values[m - order..])
    };
    let floor = values
        .iter()
        .map(|v| v.magnitude())
        .fold(scale, T::max)
        * T::epsilon()
        * T::lit(1e3);
    let error = (best - previous).magnitude();
    let first = (values[m - 1] - values[m - 2]).magnitude();
    if error > floor && error > first * T::lit(10.0) {
        return Err(Error::NonConvergent(error.to_f64_lossy()));
    }
    Ok(Estimate {
        value: best,
        error: error.max(floor),
    })
}

/// Value at zero of the fit in the odd-power basis through all given points.
fn fit_at_zero<T: Scalar, V: QuadValue<T>>(eps: &[T], values: &[V]) -> V {
    let n = eps.len();
    let unit = eps[0];
    // a[j][i] = basis_j(eps_i); solve a c = e_0 for the weights c.
    let mut a: Vec<Vec<T>> = (0..n)
        .map(|j| {
            eps.iter()
                .map(|&e| {
                    if j == 0 {
                        T::one()
                    } else {
                        (e / unit).powi(2 * j as i32 - 1)
                    }
                })
                .collect()
        })
        .collect();
    let mut rhs: Vec<T> = (0..n).map(|j| if j == 0 { T::one() } else { T::zero() }).collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).expect("finite"))
            .expect("nonempty");
        a.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[row][c] = a[row][c] - factor * v;
            }
            rhs[row] = rhs[row] - factor * rhs[col];
        }
    }
    let mut c = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc = acc - a[row][k] * c[k];
        }
        c[row] = acc / a[row][row];
    }
    values
        .iter()
        .zip(&c)
        .fold(V::zero(), |acc, (v, &w)| acc + *v * w)
}
