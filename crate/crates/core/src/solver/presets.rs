use serde::{Deserialize, Serialize};

use crate::operators::{BoundarySample, SmoothnessHint, SupportHint};
use crate::scalar::Scalar;

/// Shipped boundary data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// `e^{-y^2}`.
    Gaussian,
    /// `C^inf` bump supported in `[0.5, 1.5]`, away from the interface.
    Bump,
    /// `chi_[-1, 1]`.
    Indicator,
    /// `1 / (pi (1 + y^2))`.
    Rational,
    /// `max(0, 1 - |y - 1/2|)`.
    Hat,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Gaussian,
        Preset::Bump,
        Preset::Indicator,
        Preset::Rational,
        Preset::Hat,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Gaussian => "gaussian",
            Preset::Bump => "bump",
            Preset::Indicator => "indicator",
            Preset::Rational => "rational",
            Preset::Hat => "hat",
        }
    }

    pub fn sample<T: Scalar>(&self) -> BoundarySample<T> {
        let r = match self {
            Preset::Gaussian => BoundarySample::new(
                |y: T| (-y * y).exp(),
                SupportHint::ExponentialDecay,
                SmoothnessHint::Smooth,
            ),
            Preset::Bump => bump(T::one(), T::half()),
            Preset::Indicator => BoundarySample::new(
                |_| T::one(),
                SupportHint::Compact(-T::one(), T::one()),
                SmoothnessHint::Smooth,
            ),
            Preset::Rational => BoundarySample::new(
                |y: T| T::FRAC_1_PI() / (T::one() + y * y),
                SupportHint::AlgebraicDecay(T::two()),
                SmoothnessHint::Smooth,
            ),
            Preset::Hat => BoundarySample::new(
                |y: T| (T::one() - (y - T::half()).abs()).max(T::zero()),
                SupportHint::Compact(-T::half(), T::lit(1.5)),
                SmoothnessHint::PiecewiseSmooth(vec![T::half()]),
            ),
        };
        r.expect("preset metadata is valid")
    }
}

/// `exp(1 - 1/(1 - r^2))`, `r = (y - center)/radius`, peak value 1.
pub fn bump<T: Scalar>(center: T, radius: T) -> Result<BoundarySample<T>, crate::error::Error> {
    BoundarySample::new(
        move |y: T| {
            let r = (y - center) / radius;
            let s = T::one() - r * r;
            if s > T::zero() {
                (T::one() - s.recip()).exp()
            } else {
                T::zero()
            }
        },
        SupportHint::Compact(center - radius, center + radius),
        SmoothnessHint::Smooth,
    )
}

impl std::str::FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown preset `{s}`"))
    }
}
