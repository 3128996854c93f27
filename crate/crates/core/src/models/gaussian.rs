//! Multivariate Gaussian target and its smoothed marginal.

use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;

use super::linear::{GaussianBlock, LinearBlock, LinearSplitModel};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `N(μ, Σ)` with a cached Cholesky factor.
#[derive(Debug, Clone)]
pub struct GaussianTarget {
    pub mean: DVector<f64>,
    pub covariance: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl GaussianTarget {
    pub fn new(mean: DVector<f64>, covariance: DMatrix<f64>) -> Result<Self> {
        if covariance.nrows() != mean.len() || covariance.ncols() != mean.len() {
            return Err(Error::domain("covariance does not match the mean"));
        }
        let chol = covariance
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Numeric("covariance is not positive definite".into()))?;
        Ok(Self { mean, covariance, chol })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Normalized log-density.
    pub fn log_density(&self, theta: &[f64]) -> f64 {
        let d = self.dim() as f64;
        let r = DVector::from_column_slice(theta) - &self.mean;
        let w = self.chol.l().solve_lower_triangular(&r).expect("invertible factor");
        let log_det: f64 = self.chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>() * 2.0;
        -0.5 * (w.norm_squared() + log_det + d * (2.0 * std::f64::consts::PI).ln())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let e = DVector::from_fn(self.dim(), |_, _| f64::std_normal(rng));
        (&self.mean + self.chol.l() * e).as_slice().to_vec()
    }

    /// Eigenvalues of Σ in increasing order.
    pub fn covariance_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.covariance.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Regularity constants of the potential: `M_f = 1/λ_min(Σ)` and `𝖬_f = Tr(Σ⁻¹)`.
    pub fn smoothness_constants(&self) -> (f64, f64) {
        let ev = self.covariance_eigenvalues();
        (1.0 / ev[0], ev.iter().map(|v| 1.0 / v).sum())
    }
}

/// `Σ_ij = scale · exp(−(s_i − s_j)²/(2a²)) + nugget·δ_ij` on `d` regularly
/// spaced points of `[−3, 3]`.
pub fn squared_exponential_covariance(d: usize, a: f64, scale: f64, nugget: f64) -> DMatrix<f64> {
    let s: Vec<f64> = if d == 1 {
        vec![0.0]
    } else {
        (0..d).map(|i| -3.0 + 6.0 * i as f64 / (d - 1) as f64).collect()
    };
    DMatrix::from_fn(d, d, |i, j| {
        let u = s[i] - s[j];
        scale * (-u * u / (2.0 * a * a)).exp() + if i == j { nugget } else { 0.0 }
    })
}

/// `π_ρ = N(μ, Σ + ρ²I)`.
pub fn gaussian_marginal_exact(t: &GaussianTarget, rho: f64) -> Result<GaussianTarget> {
    let d = t.dim();
    GaussianTarget::new(t.mean.clone(), &t.covariance + DMatrix::identity(d, d) * (rho * rho))
}

/// Exact `W₂(N(μ, Σ), N(μ, Σ + ρ²I))`; the covariances commute, so this is
/// `(Σ_k (√λ_k − √(λ_k + ρ²))²)^{1/2}`.
pub fn gaussian_w2_exact(t: &GaussianTarget, rho: f64) -> f64 {
    let r2 = rho * rho;
    t.covariance_eigenvalues()
        .iter()
        .map(|&l| {
            let l = l.max(0.0);
            // √λ − √(λ+ρ²) = −ρ²/(√λ + √(λ+ρ²))
            let diff = r2 / (l.sqrt() + (l + r2).sqrt());
            diff * diff
        })
        .sum::<f64>()
        .sqrt()
}

/// `(Tr(Σ + ρ²I − 2ρΣ^{1/2}))^{1/2}`, the expression printed alongside the
/// Gaussian experiment. It equals `W₂(N(μ, Σ), N(μ, ρ²I))`.
pub fn gaussian_w2_printed(t: &GaussianTarget, rho: f64) -> f64 {
    t.covariance_eigenvalues()
        .iter()
        .map(|&l| (l.max(0.0).sqrt() - rho).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// One-block split model `θ | z ~ N(z, ρ²I)`, `z | θ ∝ N(z; μ, Σ) N(z; θ, ρ²I)`.
pub fn gaussian_split_model(t: &GaussianTarget, rho: f64) -> Result<LinearSplitModel> {
    let d = t.dim();
    let block = LinearBlock {
        operator: DMatrix::identity(d, d),
        rho,
        potential: Arc::new(GaussianBlock::normal(&t.mean, &t.covariance)?),
    };
    LinearSplitModel::new(DMatrix::zeros(d, d), DVector::zeros(d), vec![block])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn marginal_examples() {
        let t = GaussianTarget::new(DVector::from_element(1, 0.0), DMatrix::from_element(1, 1, 1.0)).unwrap();
        assert_relative_eq!(gaussian_marginal_exact(&t, 0.5).unwrap().covariance[(0, 0)], 1.25);
        assert_eq!(gaussian_marginal_exact(&t, 0.0).unwrap().covariance, t.covariance);
        let s = squared_exponential_covariance(10, 1.5, 2.0, 1e-6);
        let se = GaussianTarget::new(DVector::zeros(10), s.clone()).unwrap();
        let m = gaussian_marginal_exact(&se, 0.3).unwrap();
        for i in 0..10 {
            assert_relative_eq!(m.covariance[(i, i)], s[(i, i)] + 0.09, max_relative = 1e-15);
        }
    }

    #[test]
    fn w2_examples() {
        let d = 4;
        let t = GaussianTarget::new(DVector::zeros(d), DMatrix::identity(d, d)).unwrap();
        assert_eq!(gaussian_w2_exact(&t, 0.0), 0.0);
        let rho: f64 = 0.7;
        let want = (d as f64 * ((1.0 + rho * rho).sqrt() - 1.0).powi(2)).sqrt();
        assert_relative_eq!(gaussian_w2_exact(&t, rho), want, max_relative = 1e-12);
        let se = GaussianTarget::new(DVector::zeros(10), squared_exponential_covariance(10, 1.5, 2.0, 1e-6)).unwrap();
        for &r in &[1e-3, 0.1, 1.0, 3.0] {
            assert!(gaussian_w2_exact(&se, r) <= r * 10f64.sqrt());
        }
        assert_relative_eq!(gaussian_w2_printed(&t, 1.0), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn log_density_normalization_in_one_dimension() {
        let t = GaussianTarget::new(DVector::from_element(1, 0.5), DMatrix::from_element(1, 1, 4.0)).unwrap();
        assert_relative_eq!(t.log_density(&[0.5]), -0.5 * (8.0 * std::f64::consts::PI).ln(), max_relative = 1e-14);
    }
}
