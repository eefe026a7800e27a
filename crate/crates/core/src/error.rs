use thiserror::Error;

/// Errors raised by configuration, quadrature, operators and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Lebesgue exponent p = {0}; need 1 < p < infinity")]
    InvalidExponent(f64),
    #[error("no admissible alpha for k = {k} in the open interval ({lo}, {hi})")]
    BranchDegenerate { k: f64, lo: f64, hi: f64 },
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("invalid quadrature scheme: {0}")]
    InvalidScheme(String),
    #[error("principal-value point {0} lies on the integration boundary")]
    SingularityOnBoundary(f64),
    #[error("extrapolation did not converge (last error estimate {0:e})")]
    NonConvergent(f64),
    #[error("endpoint power {0} is not integrable (need > -1)")]
    NonIntegrable(f64),
    #[error("tail decay rate {0} is too slow for an integrable tail (need > 1)")]
    TailTooSlow(f64),
    #[error("sampled function does not decay at the log-grid window ends (ratio {0:e})")]
    WindowLeak(f64),
    #[error("non-finite value encountered during quadrature")]
    QuadratureFailure,
    #[error("operator exponent {exponent} outside the boundedness range ({lo}, {hi})")]
    OutOfBoundednessRange { exponent: f64, lo: f64, hi: f64 },
    #[error("boundary equation not invertible: k = {k} is within {distance:e} of the threshold {threshold}")]
    NotInvertible { k: f64, threshold: f64, distance: f64 },
    #[error("problem not well posed: k = {k} equals the threshold {threshold}")]
    NotWellPosed { k: f64, threshold: f64 },
    #[error("evaluation on the interface x = 0 is not defined")]
    EvaluationOnInterface,
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("oscillatory integral did not converge (spread {0:e})")]
    OscillatoryNonConvergence(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
