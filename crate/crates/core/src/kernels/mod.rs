//! Smoothing densities built from kernels or divergence functions.

mod divergence;
mod kernel;
mod smoothing;

pub use divergence::{eval_bregman, DivergenceFamily};
pub use kernel::{kernel_moment, KernelFamily};
pub use smoothing::{SmoothingDensity, SmoothingSource};
