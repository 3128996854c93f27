//! Asymptotically exact data augmentation.
//!
//! A target `π(θ) ∝ exp(−Σ_j f_j(A_jθ))` is replaced by the augmented density
//! `π_ρ(θ, z) ∝ Π_j exp(−f_j(z_j)) κ_ρ(z_j, A_jθ)` whose θ-marginal tends to π
//! as the tolerance ρ goes to zero. The crate provides
//!
//! - smoothing densities `κ_ρ` built from kernels or divergences ([`kernels`]),
//! - non-asymptotic bounds between π and π_ρ ([`bounds`]),
//! - a split Gibbs sampler and the random variate generators it needs ([`samplers`]),
//! - Gaussian, lasso, inpainting and logistic instances ([`models`]),
//! - quadratic-penalty and Monte Carlo EM solvers ([`optimize`]).
//!
//! Special functions, quadrature, kernels, divergences and bounds are generic
//! over [`Real`] (`f32` or `f64`); linear algebra, FFT and sampling code work
//! in `f64`.

// negated comparisons reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod kernels;
pub mod models;
pub mod optimize;
pub mod quad;
pub mod samplers;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Real;

pub use bounds::{BoundReport, LipschitzBlock, RegularityProfile};
pub use kernels::{DivergenceFamily, KernelFamily, SmoothingDensity, SmoothingSource};
pub use samplers::{run_split_gibbs, ChainOutput, GibbsConfig, GibbsState, SplitModel};

/// Double precision smoothing density.
pub type SmoothingDensityF64 = SmoothingDensity<f64>;
/// Single precision smoothing density.
pub type SmoothingDensityF32 = SmoothingDensity<f32>;
/// Double precision regularity profile.
pub type RegularityProfileF64 = RegularityProfile<f64>;
/// Single precision regularity profile.
pub type RegularityProfileF32 = RegularityProfile<f32>;
/// Double precision bound report.
pub type BoundReportF64 = BoundReport<f64>;
/// Single precision bound report.
pub type BoundReportF32 = BoundReport<f32>;
