//! Problem parameters, the k <-> alpha correspondence and well-posedness
//! classification for the coefficient family
//!
//! ```text
//! A_k(x) = [  1          k sgn(x) ]
//!          [ -k sgn(x)   1        ]
//! ```
//!
//! The symmetric part of `A_k` is the identity, so the accretivity constant
//! is [`ACCRETIVITY`] for every `k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `Re(A_k v, v) >= ACCRETIVITY |v|^2` for all `k`.
pub const ACCRETIVITY: f64 = 1.0;

/// Absolute band on `|k - threshold|` inside which a classification reports
/// [`Status::Threshold`] and a branch is rejected as degenerate.
pub const THRESHOLD_BAND: f64 = 1e-12;

/// Which solution family alpha is taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `alpha in (-1, 1)`: the finite-energy (Lax-Milgram) solution.
    #[serde(rename = "h1")]
    H1Branch,
    /// `alpha in (1/q - 2, 1/q)`: the boundary-equation solution.
    #[serde(rename = "lpinf")]
    LpInfBranch,
}

impl std::str::FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "h1" => Ok(Branch::H1Branch),
            "lpinf" => Ok(Branch::LpInfBranch),
            other => Err(format!("unknown branch `{other}` (expected h1 or lpinf)")),
        }
    }
}

/// Conjugate exponent `q` with `1/p + 1/q = 1`.
pub fn conjugate<T: Scalar>(p: T) -> Result<T> {
    if !(p > T::one()) || !p.is_finite() {
        return Err(Error::InvalidExponent(p.to_f64_lossy()));
    }
    Ok(p / (p - T::one()))
}

/// `alpha in (-1, 1)` with `tan(pi alpha / 2) = k`.
pub fn principal_alpha<T: Scalar>(k: T) -> T {
    k.atan() * T::two() / T::PI()
}

/// `tan(pi alpha / 2)`.
pub fn k_of_alpha<T: Scalar>(alpha: T) -> T {
    (T::PI() * alpha / T::two()).tan()
}

/// The unique alpha in the open interval `(lo, lo + 2)` solving
/// `tan(pi alpha / 2) = k`. Returns `BranchDegenerate` when the solution sits
/// on an endpoint (within [`THRESHOLD_BAND`] measured in `k`).
pub fn alpha_in_window<T: Scalar>(k: T, lo: T) -> Result<T> {
    let hi = lo + T::two();
    let degenerate = || Error::BranchDegenerate {
        k: k.to_f64_lossy(),
        lo: lo.to_f64_lossy(),
        hi: hi.to_f64_lossy(),
    };
    if !k.is_finite() {
        return Err(degenerate());
    }
    // The endpoint lo solves tan(pi lo / 2) = k_edge; both endpoints share it.
    let k_edge = k_of_alpha(lo);
    let cos_edge = (T::PI() * lo / T::two()).cos();
    if cos_edge.abs() > T::lit(1e-15) && (k - k_edge).abs() <= T::lit(THRESHOLD_BAND) {
        return Err(degenerate());
    }
    let a0 = principal_alpha(k);
    let two = T::two();
    let mut candidate = a0;
    while candidate <= lo {
        candidate = candidate + two;
    }
    while candidate >= hi {
        candidate = candidate - two;
    }
    if candidate <= lo || candidate >= hi {
        return Err(degenerate());
    }
    Ok(candidate)
}

/// Parameters of one boundary value problem instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemConfig<T> {
    pub k: T,
    pub p: T,
    pub q: T,
    pub branch: Branch,
    /// Stored, never recomputed: `tan` is not injective.
    pub alpha: T,
}

impl<T: Scalar> ProblemConfig<T> {
    /// Build a configuration, selecting alpha on the requested branch.
    pub fn derive(k: T, p: T, branch: Branch) -> Result<Self> {
        let q = conjugate(p)?;
        if !k.is_finite() {
            return Err(Error::DomainError(format!("k must be finite, got {k}")));
        }
        let alpha = match branch {
            Branch::H1Branch => principal_alpha(k),
            Branch::LpInfBranch => alpha_in_window(k, q.recip() - T::two())?,
        };
        Ok(Self {
            k,
            p,
            q,
            branch,
            alpha,
        })
    }

    /// The `(lo, hi)` interval the branch confines alpha to.
    pub fn branch_interval(&self) -> (T, T) {
        match self.branch {
            Branch::H1Branch => (-T::one(), T::one()),
            Branch::LpInfBranch => (self.q.recip() - T::two(), self.q.recip()),
        }
    }

    pub fn accretivity(&self) -> T {
        T::lit(ACCRETIVITY)
    }
}

/// Boundary value problem type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Dirichlet,
    Regularity,
    Neumann,
}

impl Problem {
    pub const ALL: [Problem; 3] = [Problem::Dirichlet, Problem::Regularity, Problem::Neumann];

    pub fn name(&self) -> &'static str {
        match self {
            Problem::Dirichlet => "dirichlet",
            Problem::Regularity => "regularity",
            Problem::Neumann => "neumann",
        }
    }
}

impl std::str::FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" | "dir" => Ok(Problem::Dirichlet),
            "regularity" | "reg" => Ok(Problem::Regularity),
            "neumann" | "neu" => Ok(Problem::Neumann),
            other => Err(format!("unknown problem `{other}`")),
        }
    }
}

/// Sense in which well-posedness is asserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    H1Sense,
    LpInfSense,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    WellPosed,
    Fails,
    Threshold,
    /// Nothing is asserted on this side of the threshold.
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WellposednessReport<T> {
    pub problem: Problem,
    pub sense: Sense,
    pub status: Status,
    pub threshold_value: T,
}

/// Critical `k`: `tan(pi/(2q))` (Dirichlet), `-tan(pi/(2p))` (regularity),
/// `tan(pi/(2p))` (Neumann). The same values apply in both senses.
pub fn threshold<T: Scalar>(problem: Problem, p: T) -> Result<T> {
    let q = conjugate(p)?;
    let half_pi = T::PI() / T::two();
    Ok(match problem {
        Problem::Dirichlet => (half_pi / q).tan(),
        Problem::Regularity => -(half_pi / p).tan(),
        Problem::Neumann => (half_pi / p).tan(),
    })
}

/// Classification in the energy sense and the boundary-equation sense.
pub fn classify<T: Scalar>(problem: Problem, k: T, p: T) -> Result<[WellposednessReport<T>; 2]> {
    let th = threshold(problem, p)?;
    let at_threshold = (k - th).abs() <= T::lit(THRESHOLD_BAND);
    let beyond = match problem {
        Problem::Dirichlet | Problem::Neumann => k > th,
        Problem::Regularity => k < th,
    };
    let h1 = if at_threshold {
        Status::Threshold
    } else if beyond {
        Status::Fails
    } else {
        Status::Unknown
    };
    let lp = if at_threshold {
        Status::Threshold
    } else {
        Status::WellPosed
    };
    Ok([
        WellposednessReport {
            problem,
            sense: Sense::H1Sense,
            status: h1,
            threshold_value: th,
        },
        WellposednessReport {
            problem,
            sense: Sense::LpInfSense,
            status: lp,
            threshold_value: th,
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_examples() {
        let c = ProblemConfig::<f64>::derive(0.0, 2.0, Branch::H1Branch).unwrap();
        assert_eq!(c.alpha, 0.0);
        assert_eq!(c.q, 2.0);

        let c = ProblemConfig::<f64>::derive(1.0, 2.0, Branch::H1Branch).unwrap();
        assert!((c.alpha - 0.5).abs() < 1e-15);

        let err = ProblemConfig::derive(1.0, 2.0, Branch::LpInfBranch).unwrap_err();
        assert!(matches!(err, Error::BranchDegenerate { .. }));
    }

    #[test]
    fn degenerate_branch_matches_grid_scan() {
        // Scan tan(pi a / 2) over the open interval (-3/2, 1/2): the value 1 is
        // only approached at the excluded endpoint -3/2.
        let n = 200_000;
        let (lo, hi) = (-1.5f64, 0.5f64);
        let mut best = f64::INFINITY;
        let mut best_a = 0.0;
        for i in 1..n {
            let a = lo + (hi - lo) * i as f64 / n as f64;
            let d = (k_of_alpha(a) - 1.0).abs();
            if d < best {
                best = d;
                best_a = a;
            }
        }
        // tan(pi a / 2) = 1 at both open endpoints.
        assert!((best_a - lo).abs().min((best_a - hi).abs()) < 1e-4, "closest alpha {best_a}");
        assert!(best > 1e-6);
    }

    #[test]
    fn invalid_exponent() {
        assert!(matches!(
            ProblemConfig::derive(0.0, 1.0, Branch::H1Branch),
            Err(Error::InvalidExponent(_))
        ));
        assert!(matches!(
            ProblemConfig::<f64>::derive(0.0, f64::INFINITY, Branch::H1Branch),
            Err(Error::InvalidExponent(_))
        ));
        assert!(matches!(classify(Problem::Neumann, 0.0, 0.5), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn lpinf_branch_shifts_by_two() {
        // p = 3/2 -> 1/q = 1/3; k = 2 has principal alpha ~ 0.705 > 1/3.
        let h1 = ProblemConfig::<f64>::derive(2.0, 1.5, Branch::H1Branch).unwrap();
        let lp = ProblemConfig::<f64>::derive(2.0, 1.5, Branch::LpInfBranch).unwrap();
        assert!((h1.alpha - lp.alpha - 2.0).abs() < 1e-14);
        let (lo, hi) = lp.branch_interval();
        assert!(lp.alpha > lo && lp.alpha < hi);
    }

    #[test]
    fn classify_examples() {
        let [h1, lp] = classify::<f64>(Problem::Dirichlet, 2.0, 2.0).unwrap();
        assert_eq!(h1.status, Status::Fails);
        assert_eq!(lp.status, Status::WellPosed);
        assert!((h1.threshold_value - 1.0).abs() < 1e-15);

        let [h1, lp] = classify::<f64>(Problem::Neumann, 0.0, 3.0).unwrap();
        assert_eq!(h1.status, Status::Unknown);
        assert_eq!(lp.status, Status::WellPosed);

        let [h1, lp] = classify::<f64>(Problem::Regularity, -1.0, 2.0).unwrap();
        assert_eq!(h1.status, Status::Threshold);
        assert_eq!(lp.status, Status::Threshold);
    }

    #[test]
    fn dirichlet_threshold_at_p4() {
        let th = threshold(Problem::Dirichlet, 4.0).unwrap();
        assert!((th - (3.0 * std::f64::consts::PI / 8.0).tan()).abs() < 1e-14);
    }

    #[test]
    fn single_precision_config() {
        let c = ProblemConfig::<f32>::derive(1.0, 3.0, Branch::LpInfBranch).unwrap();
        assert!((k_of_alpha(c.alpha) - 1.0).abs() < 1e-5);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn alpha_reproduces_k(k in -50.0f64..50.0, p in 1.05f64..20.0) {
                for branch in [Branch::H1Branch, Branch::LpInfBranch] {
                    if let Ok(c) = ProblemConfig::derive(k, p, branch) {
                        let back = k_of_alpha(c.alpha);
                        prop_assert!((back - k).abs() <= 1e-14 * k.abs().max(1.0) * 8.0,
                            "k={} back={}", k, back);
                        let (lo, hi) = c.branch_interval();
                        prop_assert!(c.alpha > lo && c.alpha < hi);
                    }
                }
            }

            #[test]
            fn branches_differ_by_zero_or_two(k in -50.0f64..50.0, p in 1.05f64..20.0) {
                let h1 = ProblemConfig::<f64>::derive(k, p, Branch::H1Branch).unwrap();
                if let Ok(lp) = ProblemConfig::derive(k, p, Branch::LpInfBranch) {
                    let d = h1.alpha - lp.alpha;
                    prop_assert!(d.abs() < 1e-14 || (d - 2.0).abs() < 1e-14, "d={}", d);
                }
            }

            #[test]
            fn dirichlet_neumann_duality(p in 1.05f64..20.0) {
                let q = conjugate(p).unwrap();
                let dir = threshold(Problem::Dirichlet, p).unwrap();
                let neu = threshold(Problem::Neumann, q).unwrap();
                prop_assert!((dir - neu).abs() <= 1e-12 * dir.abs().max(1.0));
            }
        }
    }
}
