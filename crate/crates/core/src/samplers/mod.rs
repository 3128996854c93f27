//! Random variate generators, the split Gibbs engine and chain diagnostics.

mod ars;
mod diagnostics;
mod gaussian;
mod gibbs;
mod inverse_gaussian;
mod rng;
mod truncnorm;

pub use ars::{sample_log_concave_1d, sample_log_concave_1d_scaled};
pub use diagnostics::{autocorrelation, ess, estimate_tv_mc, hpd_threshold, TvEstimate};
pub use gaussian::{
    periodic_gradient, periodic_gradient_adjoint, periodic_gradient_matrix, sample_gaussian_circulant_fft,
    sample_gaussian_precision, CirculantGradientSampler, GaussianPrecisionSampler,
};
pub use gibbs::{
    gibbs_step, run_split_gibbs, run_split_gibbs_from, BlockState, ChainOutput, GibbsConfig, GibbsState, SplitModel,
};
pub use inverse_gaussian::{inverse_gaussian_cdf, sample_inverse_gaussian};
pub use rng::{stream, StreamRng, THETA_STREAM};
pub use truncnorm::{sample_std_normal_tail, sample_truncated_normal};
