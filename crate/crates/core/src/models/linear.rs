//! Split models whose blocks see θ through linear operators and are coupled
//! to it by Gaussian smoothing.

use std::fmt::Debug;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOptions};
use crate::samplers::{
    sample_log_concave_1d_scaled, sample_truncated_normal, BlockState, GaussianPrecisionSampler, GibbsState,
    SplitModel, StreamRng,
};
use crate::special::{log_add_exp, log_ndtr};
use rand::Rng;

/// Potential `f_j` of one block together with its Gaussian-smoothed
/// conditional `∝ exp(−f_j(z) − ‖z − m‖²/(2ρ²))`.
pub trait BlockPotential: Send + Sync + Debug {
    fn dim(&self) -> usize;
    fn value(&self, z: &[f64]) -> f64;
    fn sample_conditional(&self, m: &[f64], rho: f64, rng: &mut StreamRng) -> Result<Vec<f64>>;
    /// `argmin_z f_j(z) + ‖z − m‖²/(2ρ²)`.
    fn minimize_conditional(&self, m: &[f64], rho: f64) -> Result<Vec<f64>>;
    /// Mean of the smoothed conditional.
    fn conditional_mean(&self, m: &[f64], rho: f64) -> Result<Vec<f64>>;
    /// Lipschitz constant of `f_j`, when finite.
    fn lipschitz(&self) -> Option<f64> {
        None
    }
}

/// Quadratic potential `½ zᵀPz − cᵀz`.
#[derive(Debug, Clone)]
pub struct GaussianBlock {
    pub precision: DMatrix<f64>,
    pub linear: DVector<f64>,
}

impl GaussianBlock {
    pub fn new(precision: DMatrix<f64>, linear: DVector<f64>) -> Result<Self> {
        if !precision.is_square() || precision.nrows() != linear.len() {
            return Err(Error::domain("gaussian block dimensions do not match"));
        }
        Ok(Self { precision, linear })
    }

    /// `‖y − z‖²/(2s²)`, a Gaussian likelihood shard.
    pub fn likelihood(y: &[f64], noise_var: f64) -> Result<Self> {
        if !(noise_var > 0.0) {
            return Err(Error::domain("noise variance must be positive"));
        }
        let k = y.len();
        Self::new(
            DMatrix::identity(k, k) / noise_var,
            DVector::from_column_slice(y) / noise_var,
        )
    }

    /// Potential of `N(mean, cov)`.
    pub fn normal(mean: &DVector<f64>, cov: &DMatrix<f64>) -> Result<Self> {
        let p = cov
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::domain("covariance is singular"))?;
        let c = &p * mean;
        Self::new(p, c)
    }

    fn conditional(&self, m: &[f64], rho: f64) -> Result<(GaussianPrecisionSampler, DVector<f64>)> {
        let k = self.linear.len();
        let q = &self.precision + DMatrix::identity(k, k) / (rho * rho);
        let b = &self.linear + DVector::from_column_slice(m) / (rho * rho);
        Ok((GaussianPrecisionSampler::new(&q)?, b))
    }
}

impl BlockPotential for GaussianBlock {
    fn dim(&self) -> usize {
        self.linear.len()
    }

    fn value(&self, z: &[f64]) -> f64 {
        let z = DVector::from_column_slice(z);
        0.5 * z.dot(&(&self.precision * &z)) - self.linear.dot(&z)
    }

    fn sample_conditional(&self, m: &[f64], rho: f64, rng: &mut StreamRng) -> Result<Vec<f64>> {
        let (s, b) = self.conditional(m, rho)?;
        Ok(s.sample(&b, rng).as_slice().to_vec())
    }

    fn minimize_conditional(&self, m: &[f64], rho: f64) -> Result<Vec<f64>> {
        self.conditional_mean(m, rho)
    }

    fn conditional_mean(&self, m: &[f64], rho: f64) -> Result<Vec<f64>> {
        let (s, b) = self.conditional(m, rho)?;
        Ok(s.mean(&b).as_slice().to_vec())
    }
}

/// `τ‖z‖₁` on `dim` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Block {
    pub tau: f64,
    pub dim: usize,
}

/// Log-weights and locations of the two half-line branches of
/// `exp(−τ|z| − (z − μ)²/(2ρ²))`.
fn l1_branches(tau: f64, mu: f64, rho: f64) -> (f64, f64, f64, f64) {
    let r2 = rho * rho;
    let pos_mean = mu - tau * r2;
    let neg_mean = mu + tau * r2;
    let lw_pos = -tau * mu + log_ndtr(pos_mean / rho);
    let lw_neg = tau * mu + log_ndtr(-neg_mean / rho);
    (lw_pos, lw_neg, pos_mean, neg_mean)
}

/// Exact draw from `∝ exp(−τ|z| − (z − μ)²/(2ρ²))`.
pub fn sample_l1_conditional<R: Rng + ?Sized>(tau: f64, mu: f64, rho: f64, rng: &mut R) -> Result<f64> {
    let (lw_pos, lw_neg, pos_mean, neg_mean) = l1_branches(tau, mu, rho);
    let p_pos = (lw_pos - log_add_exp(lw_pos, lw_neg)).exp();
    if rng.random::<f64>() < p_pos {
        sample_truncated_normal(pos_mean, rho, 0.0, true, rng)
    } else {
        sample_truncated_normal(neg_mean, rho, 0.0, false, rng)
    }
}

/// Mean of `∝ exp(−τ|z| − (z − μ)²/(2ρ²))`.
pub fn l1_conditional_mean(tau: f64, mu: f64, rho: f64) -> f64 {
    let (lw_pos, lw_neg, a, b) = l1_branches(tau, mu, rho);
    let p_pos = (lw_pos - log_add_exp(lw_pos, lw_neg)).exp();
    let log_phi = |x: f64| -0.5 * x * x - 0.5 * (2.0 * std::f64::consts::PI).ln();
    // truncated normal means on [0, ∞) and (−∞, 0]
    let m_pos = a + rho * (log_phi(a / rho) - log_ndtr(a / rho)).exp();
    let m_neg = b - rho * (log_phi(b / rho) - log_ndtr(-b / rho)).exp();
    p_pos * m_pos + (1.0 - p_pos) * m_neg
}

/// Soft thresholding, the proximal map of `t|·|`.
pub fn soft_threshold(x: f64, t: f64) -> f64 {
    x.signum() * (x.abs() - t).max(0.0)
}

impl BlockPotential for L1Block {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, z: &[f64]) -> f64 {
        self.tau * z.iter().map(|v| v.abs()).sum::<f64>()
    }

    fn sample_conditional(&self, m: &[f64], rho: f64, rng: &mut StreamRng) -> Result<Vec<f64>> {
        m.iter().map(|&mu| sample_l1_conditional(self.tau, mu, rho, rng)).collect()
    }

    fn minimize_conditional(&self, m: &[f64], rho: f64) -> Result<Vec<f64>> {
        Ok(m.iter().map(|&mu| soft_threshold(mu, self.tau * rho * rho)).collect())
    }

    fn conditional_mean(&self, m: &[f64], rho: f64) -> Result<Vec<f64>> {
        Ok(m.iter().map(|&mu| l1_conditional_mean(self.tau, mu, rho)).collect())
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(self.tau * (self.dim as f64).sqrt())
    }
}

/// `log(1 + exp(s·y·z))` for one observation; `s = +1` is the sign printed in
/// the original sampler description, `s = −1` the usual logistic loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticBlock {
    pub label: f64,
    pub sign: f64,
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl LogisticBlock {
    pub fn new(label: f64, sign: f64) -> Result<Self> {
        if label != 1.0 && label != -1.0 {
            return Err(Error::domain(format!("labels must be -1 or +1, got {label}")));
        }
        if sign != 1.0 && sign != -1.0 {
            return Err(Error::domain("sign must be -1 or +1"));
        }
        Ok(Self { label, sign })
    }

    fn conditional_neg_log(&self, z: f64, m: f64, rho: f64) -> f64 {
        softplus(self.sign * self.label * z) + (z - m) * (z - m) / (2.0 * rho * rho)
    }

    fn minimizer(&self, m: f64, rho: f64) -> f64 {
        let s = self.sign * self.label;
        let r2 = rho * rho;
        let grad = |z: f64| s * sigmoid(s * z) + (z - m) / r2;
        // |f'| ≤ 1 puts the root within ρ² of m
        let (mut lo, mut hi) = (m - r2, m + r2);
        let mut z = m;
        for _ in 0..100 {
            let g = grad(z);
            if g > 0.0 {
                hi = z;
            } else {
                lo = z;
            }
            let p = sigmoid(s * z);
            let step = g / (p * (1.0 - p) + 1.0 / r2);
            let mut next = z - step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - z).abs() <= 1e-15 * (1.0 + z.abs()) {
                return next;
            }
            z = next;
        }
        z
    }
}

impl BlockPotential for LogisticBlock {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, z: &[f64]) -> f64 {
        softplus(self.sign * self.label * z[0])
    }

    fn sample_conditional(&self, m: &[f64], rho: f64, rng: &mut StreamRng) -> Result<Vec<f64>> {
        let mode = self.minimizer(m[0], rho);
        let z = sample_log_concave_1d_scaled(|z: f64| self.conditional_neg_log(z, m[0], rho), mode, rho, rng)?;
        Ok(vec![z])
    }

    fn minimize_conditional(&self, m: &[f64], rho: f64) -> Result<Vec<f64>> {
        Ok(vec![self.minimizer(m[0], rho)])
    }

    fn conditional_mean(&self, m: &[f64], rho: f64) -> Result<Vec<f64>> {
        let c = self.minimizer(m[0], rho);
        let base = self.conditional_neg_log(c, m[0], rho);
        let w = |z: f64| (base - self.conditional_neg_log(z, m[0], rho)).exp();
        let opts = QuadOptions {
            abs_tol: 1e-300,
            rel_tol: 1e-13,
            max_intervals: 4000,
        };
        // the conditional has sd ≤ ρ: sum over pieces of width 4ρ on c ± 40ρ
        let pieces = |f: &dyn Fn(f64) -> f64, o: QuadOptions| -> Result<f64> {
            (-10..10).try_fold(0.0, |acc, k| {
                let a = c + 4.0 * rho * k as f64;
                Ok(acc + integrate(f, a, a + 4.0 * rho, o)?.0)
            })
        };
        let den = pieces(&w, opts)?;
        // the centred first moment can vanish, so its tolerance is absolute
        let num_opts = QuadOptions {
            abs_tol: 1e-15 * rho * den,
            ..opts
        };
        let num = pieces(&|z: f64| (z - c) * w(z), num_opts)?;
        Ok(vec![c + num / den])
    }

    fn lipschitz(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// One block `f_j(A_j θ)` smoothed with tolerance `ρ_j`.
#[derive(Debug, Clone)]
pub struct LinearBlock {
    pub operator: DMatrix<f64>,
    pub rho: f64,
    pub potential: Arc<dyn BlockPotential>,
}

/// Target `π(θ) ∝ exp(−½θᵀP₀θ + b₀ᵀθ − Σ_j f_j(A_jθ))` with every block split
/// off through a Gaussian coupling.
#[derive(Debug, Clone)]
pub struct LinearSplitModel {
    prior_precision: DMatrix<f64>,
    prior_linear: DVector<f64>,
    blocks: Vec<LinearBlock>,
    theta_precision: DMatrix<f64>,
    theta_sampler: GaussianPrecisionSampler,
    initial_theta: Vec<f64>,
}

impl LinearSplitModel {
    pub fn new(prior_precision: DMatrix<f64>, prior_linear: DVector<f64>, blocks: Vec<LinearBlock>) -> Result<Self> {
        let d = prior_linear.len();
        if prior_precision.nrows() != d || prior_precision.ncols() != d {
            return Err(Error::domain("prior precision does not match the prior linear term"));
        }
        if blocks.is_empty() {
            return Err(Error::domain("at least one block is required"));
        }
        let mut q = prior_precision.clone();
        for (j, b) in blocks.iter().enumerate() {
            if b.operator.ncols() != d || b.operator.nrows() != b.potential.dim() {
                return Err(Error::domain(format!(
                    "block {j}: operator is {}x{}, expected {}x{d}",
                    b.operator.nrows(),
                    b.operator.ncols(),
                    b.potential.dim()
                )));
            }
            if !(b.rho > 0.0) || !b.rho.is_finite() {
                return Err(Error::domain(format!("block {j}: tolerance must be positive")));
            }
            q += b.operator.transpose() * &b.operator / (b.rho * b.rho);
        }
        let theta_sampler = GaussianPrecisionSampler::new(&q)
            .map_err(|_| Error::domain("theta normal equations are singular"))?;
        Ok(Self {
            prior_precision,
            prior_linear,
            blocks,
            theta_precision: q,
            theta_sampler,
            initial_theta: vec![0.0; d],
        })
    }

    pub fn with_initial_theta(mut self, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != self.prior_linear.len() {
            return Err(Error::domain("initial theta has the wrong length"));
        }
        self.initial_theta = theta;
        Ok(self)
    }

    pub fn blocks(&self) -> &[LinearBlock] {
        &self.blocks
    }

    pub fn prior_precision(&self) -> &DMatrix<f64> {
        &self.prior_precision
    }

    pub fn prior_linear(&self) -> &DVector<f64> {
        &self.prior_linear
    }

    /// Precision `P₀ + Σ_j A_jᵀA_j/ρ_j²` of θ given the blocks.
    pub fn theta_precision(&self) -> &DMatrix<f64> {
        &self.theta_precision
    }

    /// Same model with every tolerance replaced by `rho`.
    pub fn with_rho(&self, rho: f64) -> Result<Self> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| LinearBlock {
                operator: b.operator.clone(),
                rho,
                potential: b.potential.clone(),
            })
            .collect();
        Self::new(self.prior_precision.clone(), self.prior_linear.clone(), blocks)?
            .with_initial_theta(self.initial_theta.clone())
    }

    /// `A_j θ`.
    pub fn apply(&self, j: usize, theta: &[f64]) -> Vec<f64> {
        (&self.blocks[j].operator * DVector::from_column_slice(theta)).as_slice().to_vec()
    }

    /// `b₀ + Σ_j A_jᵀ z_j/ρ_j²`.
    pub fn theta_linear_term(&self, z: &[&[f64]]) -> DVector<f64> {
        let mut b = self.prior_linear.clone();
        for (blk, zj) in self.blocks.iter().zip(z) {
            b += blk.operator.transpose() * DVector::from_column_slice(zj) / (blk.rho * blk.rho);
        }
        b
    }

    /// `argmin_θ` of the quadratic part given the blocks.
    pub fn theta_minimizer(&self, z: &[&[f64]]) -> Vec<f64> {
        self.theta_sampler.mean(&self.theta_linear_term(z)).as_slice().to_vec()
    }

    /// Joint potential `½θᵀP₀θ − b₀ᵀθ + Σ_j f_j(z_j) + ‖A_jθ − z_j‖²/(2ρ_j²)`.
    pub fn penalized_objective(&self, theta: &[f64], z: &[&[f64]]) -> f64 {
        let th = DVector::from_column_slice(theta);
        let mut v = 0.5 * th.dot(&(&self.prior_precision * &th)) - self.prior_linear.dot(&th);
        for (j, (blk, zj)) in self.blocks.iter().zip(z).enumerate() {
            let a = self.apply(j, theta);
            let r: f64 = a.iter().zip(zj.iter()).map(|(x, y)| (x - y) * (x - y)).sum();
            v += blk.potential.value(zj) + r / (2.0 * blk.rho * blk.rho);
        }
        v
    }
}

impl SplitModel for LinearSplitModel {
    fn theta_dim(&self) -> usize {
        self.prior_linear.len()
    }

    fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    fn initial_state(&self) -> GibbsState {
        GibbsState {
            theta: self.initial_theta.clone(),
            blocks: (0..self.blocks.len())
                .map(|j| BlockState {
                    z: self.apply(j, &self.initial_theta),
                    latent: Vec::new(),
                })
                .collect(),
        }
    }

    fn sample_theta(&self, state: &GibbsState, rng: &mut StreamRng) -> Result<Vec<f64>> {
        let z: Vec<&[f64]> = state.blocks.iter().map(|b| b.z.as_slice()).collect();
        let b = self.theta_linear_term(&z);
        Ok(self.theta_sampler.sample(&b, rng).as_slice().to_vec())
    }

    fn sample_block(&self, j: usize, theta: &[f64], block: &mut BlockState, rng: &mut StreamRng) -> Result<()> {
        let m = self.apply(j, theta);
        block.z = self.blocks[j].potential.sample_conditional(&m, self.blocks[j].rho, rng)?;
        Ok(())
    }

    fn potential(&self, theta: &[f64]) -> f64 {
        let th = DVector::from_column_slice(theta);
        let mut v = 0.5 * th.dot(&(&self.prior_precision * &th)) - self.prior_linear.dot(&th);
        for (j, blk) in self.blocks.iter().enumerate() {
            v += blk.potential.value(&self.apply(j, theta));
        }
        v
    }
}
