//! Concrete augmented models.

mod gaussian;
mod inpainting;
mod lasso;
mod linear;
mod logistic;
mod losses;

pub use gaussian::{
    gaussian_marginal_exact, gaussian_split_model, gaussian_w2_exact, gaussian_w2_printed,
    squared_exponential_covariance, GaussianTarget,
};
pub use inpainting::{phantom, DenseInpaintingModel, InpaintingModel};
pub use lasso::{
    credibility_table, lasso_smoothed_potential, lasso_split_model, potential_gap_on_grid, smoothed_abs,
    CredibilityRow, GapPoint, GridDensity, LassoTarget,
};
pub use linear::{
    l1_conditional_mean, sample_l1_conditional, soft_threshold, BlockPotential, GaussianBlock, L1Block,
    LinearBlock, LinearSplitModel, LogisticBlock,
};
pub use logistic::{logistic_split_model, LogisticModel};
pub use losses::{loss_eval, LipschitzLoss};
