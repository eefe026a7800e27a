//! Closed-form operators of the first-order system: resolvents, `P_t`,
//! `Q_t`, the Cauchy singular integral `E_k = sgn(T_k)` and its Hardy
//! projections, the Cauchy extension, and the double-layer-type operator `K`
//! with its half-line family `K_alpha`.
//!
//! Every operator is available pointwise (quadrature of the kernel). `K_alpha`
//! and the inverses of `I -+ k K_0` also have a log-line multiplier route, and
//! `E_k` has a split log-grid route for compositions.

mod boundary;
mod halfline;
mod pointwise;
mod split;
mod symbols;

pub use boundary::{BoundarySample, BoundaryVectorField, SmoothnessHint, SupportHint};
pub use halfline::{
    apply_k_alpha_grid, half_line_combination, invert_half_line, k_alpha_nystrom, log_grid_sample,
    HalfLineInverse, HalfLineProfile, LogGridSettings, OpSign, INVERSION_BAND,
};
pub use pointwise::{
    apply_ek, apply_k, apply_k_alpha, apply_pt, apply_qt, cauchy_extension, check_k_alpha_bounded,
    coupling, hardy_projection, resolvent,
};
#[allow(unused_imports)]
pub(crate) use pointwise::cauchy_extension_kernel;
pub use split::{apply_ek_split, hardy_projection_split, SplitField};
pub use symbols::{hilbert_half_symbol, m_gamma, multiplier_of_ktilde, stieltjes_symbol, MultiplierSymbol};

#[cfg(test)]
mod tests;
