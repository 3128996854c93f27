//! Ridge-penalized logistic regression split per observation.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::linear::{LinearBlock, LinearSplitModel, LogisticBlock};
use crate::bounds::LipschitzBlock;
use crate::error::{Error, Result};

/// `π(θ) ∝ exp(−τ‖θ‖² − Σ_j log(1 + exp(s·y_j x_jᵀθ)))`.
///
/// `sign = +1` reproduces the sign as printed with the original sampler,
/// `sign = −1` is the usual logistic likelihood.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub y: Vec<f64>,
    pub x: DMatrix<f64>,
    pub tau: f64,
    pub rho: f64,
    pub sign: f64,
}

impl LogisticModel {
    pub fn new(y: Vec<f64>, x: DMatrix<f64>, tau: f64, rho: f64) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(Error::domain("feature rows and labels differ in number"));
        }
        if let Some(bad) = y.iter().find(|&&v| v != 1.0 && v != -1.0) {
            return Err(Error::domain(format!("labels must be -1 or +1, got {bad}")));
        }
        if !(tau > 0.0 && rho > 0.0) {
            return Err(Error::domain("tau and rho must be positive"));
        }
        Ok(Self { y, x, tau, rho, sign: 1.0 })
    }

    pub fn with_sign(mut self, sign: f64) -> Result<Self> {
        if sign != 1.0 && sign != -1.0 {
            return Err(Error::domain("sign must be -1 or +1"));
        }
        self.sign = sign;
        Ok(self)
    }

    /// Features uniform on `[0, 1]`, labels drawn from a logistic model with
    /// standard normal coefficients.
    pub fn synthetic<R: Rng + ?Sized>(n: usize, d: usize, tau: f64, rho: f64, rng: &mut R) -> Result<Self> {
        let x = DMatrix::from_fn(n, d, |_, _| rng.random::<f64>());
        let beta: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect();
        let y = (0..n)
            .map(|i| {
                let t: f64 = (0..d).map(|k| x[(i, k)] * beta[k]).sum();
                if rng.random::<f64>() < 1.0 / (1.0 + (-t).exp()) {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        Self::new(y, x, tau, rho)
    }

    pub fn dim(&self) -> usize {
        self.x.ncols()
    }

    pub fn potential(&self, theta: &[f64]) -> f64 {
        let th = DVector::from_column_slice(theta);
        let t = &self.x * &th;
        let lik: f64 = t
            .iter()
            .zip(&self.y)
            .map(|(&ti, &yi)| {
                let a = self.sign * yi * ti;
                a.max(0.0) + (-a.abs()).exp().ln_1p()
            })
            .sum();
        self.tau * th.norm_squared() + lik
    }

    /// Per-observation Lipschitz constants `‖x_j‖₂` at the model tolerance.
    pub fn lipschitz_blocks(&self) -> Vec<LipschitzBlock<f64>> {
        self.x
            .row_iter()
            .map(|r| LipschitzBlock {
                lipschitz: r.norm(),
                rho: self.rho,
            })
            .collect()
    }
}

/// One scalar block per observation, `A_j = x_jᵀ`; θ-precision `2τI + XᵀX/ρ²`.
pub fn logistic_split_model(m: &LogisticModel) -> Result<LinearSplitModel> {
    let d = m.dim();
    let blocks = m
        .x
        .row_iter()
        .zip(&m.y)
        .map(|(row, &label)| {
            Ok(LinearBlock {
                operator: DMatrix::from_row_slice(1, d, row.clone_owned().as_slice()),
                rho: m.rho,
                potential: Arc::new(LogisticBlock::new(label, m.sign)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    LinearSplitModel::new(DMatrix::identity(d, d) * (2.0 * m.tau), DVector::zeros(d), blocks)
}
