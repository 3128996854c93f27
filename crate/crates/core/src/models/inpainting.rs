//! Total-variation image inpainting with an inverse-Gaussian augmentation of
//! the isotropic TV prior.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::samplers::{
    periodic_gradient, periodic_gradient_adjoint, periodic_gradient_matrix, sample_inverse_gaussian,
    BlockState, CirculantGradientSampler, GaussianPrecisionSampler, GibbsState, SplitModel, StreamRng,
};
use crate::scalar::Real;

/// `π(θ | y) ∝ exp(−‖y − Hθ‖²/(2σ²) − τ Σ_i ‖(Dθ)_i‖₂)` on an `h × w` image,
/// with `H` selecting the observed pixels.
#[derive(Debug, Clone)]
pub struct InpaintingModel {
    shape: (usize, usize),
    mask: Vec<usize>,
    observed: Vec<bool>,
    y: Vec<f64>,
    pub sigma: f64,
    pub tau: f64,
    pub rho: f64,
    pub eta: f64,
    fft: CirculantGradientSampler,
}

impl InpaintingModel {
    /// `eta = None` selects `0.9σ²`.
    pub fn new(
        shape: (usize, usize),
        mask: Vec<usize>,
        y: Vec<f64>,
        sigma: f64,
        tau: f64,
        rho: f64,
        eta: Option<f64>,
    ) -> Result<Self> {
        let d = shape.0 * shape.1;
        if d == 0 {
            return Err(Error::domain("image must have at least one pixel"));
        }
        if mask.len() != y.len() {
            return Err(Error::domain("mask and observations differ in length"));
        }
        if mask.len() >= d {
            return Err(Error::domain("the number of observed pixels must be smaller than the image size"));
        }
        let mut observed = vec![false; d];
        for &i in &mask {
            if i >= d {
                return Err(Error::domain(format!("mask index {i} out of range")));
            }
            if observed[i] {
                return Err(Error::domain(format!("mask index {i} repeated")));
            }
            observed[i] = true;
        }
        if !(sigma > 0.0 && tau > 0.0 && rho > 0.0) {
            return Err(Error::domain("sigma, tau and rho must be positive"));
        }
        let eta = eta.unwrap_or(0.9 * sigma * sigma);
        let spectral = if mask.is_empty() { 0.0 } else { 1.0 };
        if !(eta > 0.0) || eta * spectral >= sigma * sigma {
            return Err(Error::domain(format!(
                "eta must satisfy 0 < eta·‖HᵀH‖ < sigma², got eta={eta}, sigma²={}",
                sigma * sigma
            )));
        }
        let fft = CirculantGradientSampler::new(shape.0, shape.1, eta, rho)?;
        Ok(Self {
            shape,
            mask,
            observed,
            y,
            sigma,
            tau,
            rho,
            eta,
            fft,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn num_pixels(&self) -> usize {
        self.shape.0 * self.shape.1
    }

    pub fn mask(&self) -> &[usize] {
        &self.mask
    }

    pub fn observations(&self) -> &[f64] {
        &self.y
    }

    /// `Hᵀy`: observations in place, zeros elsewhere.
    pub fn observation_image(&self) -> Vec<f64> {
        let mut img = vec![0.0; self.num_pixels()];
        for (&i, &v) in self.mask.iter().zip(&self.y) {
            img[i] = v;
        }
        img
    }

    /// Observed pixels in place and their mean elsewhere.
    pub fn initial_image(&self) -> Vec<f64> {
        let fill = if self.y.is_empty() {
            0.0
        } else {
            self.y.iter().sum::<f64>() / self.y.len() as f64
        };
        let mut img = vec![fill; self.num_pixels()];
        for (&i, &v) in self.mask.iter().zip(&self.y) {
            img[i] = v;
        }
        img
    }

    /// `f(θ) = ‖y − Hθ‖²/(2σ²) + τ Σ_i ‖(Dθ)_i‖₂`.
    pub fn potential(&self, theta: &[f64]) -> f64 {
        let d = self.num_pixels();
        let fit: f64 = self.mask.iter().zip(&self.y).map(|(&i, &v)| (v - theta[i]).powi(2)).sum();
        let g = periodic_gradient(theta, self.shape.0, self.shape.1);
        let tv: f64 = (0..d).map(|i| g[i].hypot(g[d + i])).sum();
        fit / (2.0 * self.sigma * self.sigma) + self.tau * tv
    }

    /// Draws the mixing weights from the current field `Z` and then a new `Z`
    /// given θ; returns `(Z, γ)` with `Z = (z₁, z₂)` stacked.
    pub fn step_z<R: Rng + ?Sized>(&self, theta: &[f64], z_prev: &[f64], rng: &mut R) -> Result<(Vec<f64>, Vec<f64>)> {
        let d = self.num_pixels();
        if theta.len() != d || z_prev.len() != 2 * d {
            return Err(Error::domain("image or gradient field has the wrong size"));
        }
        let tau = self.tau;
        let r2 = self.rho * self.rho;
        let mut gamma = vec![0.0; d];
        for i in 0..d {
            let norm = z_prev[i].hypot(z_prev[d + i]);
            gamma[i] = if norm > 0.0 {
                1.0 / sample_inverse_gaussian(tau / norm, tau * tau, rng)?
            } else {
                // limit ‖Z_i‖ → 0 of the conditional: Gamma(1/2, rate τ²/2)
                let g = Gamma::new(0.5, 2.0 / (tau * tau)).map_err(|e| Error::domain(e.to_string()))?;
                g.sample(rng).max(f64::MIN_POSITIVE)
            };
        }
        let dt = periodic_gradient(theta, self.shape.0, self.shape.1);
        let mut z = vec![0.0; 2 * d];
        for k in 0..2 {
            for i in 0..d {
                let g = gamma[i];
                let mean = g * dt[k * d + i] / (r2 + g);
                let var = r2 * g / (r2 + g);
                z[k * d + i] = mean + var.sqrt() * f64::std_normal(rng);
            }
        }
        Ok((z, gamma))
    }

    /// `DᵀZ/ρ² + Hᵀy/σ²`.
    fn data_term(&self, z: &[f64]) -> Vec<f64> {
        let r2 = self.rho * self.rho;
        let s2 = self.sigma * self.sigma;
        let mut b: Vec<f64> = periodic_gradient_adjoint(z, self.shape.0, self.shape.1)
            .into_iter()
            .map(|v| v / r2)
            .collect();
        for (&i, &v) in self.mask.iter().zip(&self.y) {
            b[i] += v / s2;
        }
        b
    }

    /// Auxiliary draw `v ~ N(Rθ, R)` with `R = I/η − HᵀH/σ²`, then θ from the
    /// circulant Gaussian with precision `I/η + DᵀD/ρ²`.
    pub fn step_theta<R: Rng + ?Sized>(&self, theta_prev: &[f64], z: &[f64], rng: &mut R) -> Result<Vec<f64>> {
        let d = self.num_pixels();
        if theta_prev.len() != d || z.len() != 2 * d {
            return Err(Error::domain("image or gradient field has the wrong size"));
        }
        let s2 = self.sigma * self.sigma;
        let mut b = self.data_term(z);
        for i in 0..d {
            let r = 1.0 / self.eta - if self.observed[i] { 1.0 / s2 } else { 0.0 };
            b[i] += r * theta_prev[i] + r.sqrt() * f64::std_normal(rng);
        }
        self.fft.sample(&b, rng)
    }

    /// Precision `HᵀH/σ² + DᵀD/ρ²` of θ given `Z`.
    pub fn theta_precision_dense(&self) -> DMatrix<f64> {
        let d = self.num_pixels();
        let dm = periodic_gradient_matrix(self.shape.0, self.shape.1);
        let mut q = dm.transpose() * &dm / (self.rho * self.rho);
        for &i in &self.mask {
            q[(i, i)] += 1.0 / (self.sigma * self.sigma);
        }
        debug_assert_eq!(q.nrows(), d);
        q
    }

    /// Mean of θ given `Z` from the dense precision.
    pub fn theta_mean_dense(&self, z: &[f64]) -> Result<Vec<f64>> {
        let s = GaussianPrecisionSampler::new(&self.theta_precision_dense())?;
        Ok(s.mean(&DVector::from_vec(self.data_term(z))).as_slice().to_vec())
    }

    /// The same augmented model with θ drawn directly from its dense
    /// conditional instead of the auxiliary FFT scheme.
    pub fn dense_oracle(&self) -> Result<DenseInpaintingModel> {
        Ok(DenseInpaintingModel {
            sampler: GaussianPrecisionSampler::new(&self.theta_precision_dense())?,
            model: self.clone(),
        })
    }

    fn initial(&self) -> GibbsState {
        let theta = self.initial_image();
        let z = periodic_gradient(&theta, self.shape.0, self.shape.1);
        GibbsState {
            theta,
            blocks: vec![BlockState {
                z,
                latent: vec![1.0; self.num_pixels()],
            }],
        }
    }
}

impl SplitModel for InpaintingModel {
    fn theta_dim(&self) -> usize {
        self.num_pixels()
    }

    fn num_blocks(&self) -> usize {
        1
    }

    fn initial_state(&self) -> GibbsState {
        self.initial()
    }

    fn sample_theta(&self, state: &GibbsState, rng: &mut StreamRng) -> Result<Vec<f64>> {
        self.step_theta(&state.theta, &state.blocks[0].z, rng)
    }

    fn sample_block(&self, _j: usize, theta: &[f64], block: &mut BlockState, rng: &mut StreamRng) -> Result<()> {
        let (z, gamma) = self.step_z(theta, &block.z, rng)?;
        block.z = z;
        block.latent = gamma;
        Ok(())
    }

    fn potential(&self, theta: &[f64]) -> f64 {
        InpaintingModel::potential(self, theta)
    }
}

/// Inpainting chain with an exact dense θ-conditional, used as an oracle.
#[derive(Debug, Clone)]
pub struct DenseInpaintingModel {
    model: InpaintingModel,
    sampler: GaussianPrecisionSampler,
}

impl SplitModel for DenseInpaintingModel {
    fn theta_dim(&self) -> usize {
        self.model.num_pixels()
    }

    fn num_blocks(&self) -> usize {
        1
    }

    fn initial_state(&self) -> GibbsState {
        self.model.initial()
    }

    fn sample_theta(&self, state: &GibbsState, rng: &mut StreamRng) -> Result<Vec<f64>> {
        let b = DVector::from_vec(self.model.data_term(&state.blocks[0].z));
        Ok(self.sampler.sample(&b, rng).as_slice().to_vec())
    }

    fn sample_block(&self, _j: usize, theta: &[f64], block: &mut BlockState, rng: &mut StreamRng) -> Result<()> {
        let (z, gamma) = self.model.step_z(theta, &block.z, rng)?;
        block.z = z;
        block.latent = gamma;
        Ok(())
    }

    fn potential(&self, theta: &[f64]) -> f64 {
        self.model.potential(theta)
    }
}

/// Piecewise-constant test image with values in `[0, 1]`: a disc and a
/// rectangle on a dark background.
pub fn phantom(h: usize, w: usize) -> Vec<f64> {
    let mut img = vec![0.1; h * w];
    let (cy, cx) = (h as f64 * 0.45, w as f64 * 0.4);
    let r = 0.28 * h.min(w) as f64;
    for i in 0..h {
        for j in 0..w {
            let (y, x) = (i as f64 + 0.5, j as f64 + 0.5);
            if (y - cy).powi(2) + (x - cx).powi(2) <= r * r {
                img[i * w + j] = 0.8;
            }
            if i >= 3 * h / 5 && i < 17 * h / 20 && j >= 11 * w / 20 && j < 17 * w / 20 {
                img[i * w + j] = 0.5;
            }
        }
    }
    img
}
