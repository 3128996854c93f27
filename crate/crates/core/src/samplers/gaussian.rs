//! Gaussian samplers parameterized by a precision matrix.

use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_complex::Complex64;
use rand::Rng;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Draws from `N(Q⁻¹b, Q⁻¹)` for a fixed SPD precision `Q`.
#[derive(Debug, Clone)]
pub struct GaussianPrecisionSampler {
    chol: Cholesky<f64, Dyn>,
}

impl GaussianPrecisionSampler {
    pub fn new(precision: &DMatrix<f64>) -> Result<Self> {
        if !precision.is_square() {
            return Err(Error::domain("precision matrix must be square"));
        }
        let chol = precision
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Numeric("precision matrix is not positive definite".into()))?;
        Ok(Self { chol })
    }

    pub fn dim(&self) -> usize {
        self.chol.l_dirty().nrows()
    }

    pub fn mean(&self, linear: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(linear)
    }

    pub fn sample<R: Rng + ?Sized>(&self, linear: &DVector<f64>, rng: &mut R) -> DVector<f64> {
        let l = self.chol.l();
        // Q = L Lᵀ, x = L⁻ᵀ (L⁻¹ b + ε)
        let mut w = l.solve_lower_triangular(linear).expect("cholesky factor is invertible");
        for wi in w.iter_mut() {
            *wi += f64::std_normal(rng);
        }
        l.tr_solve_lower_triangular(&w).expect("cholesky factor is invertible")
    }
}

/// One draw from `N(Q⁻¹b, Q⁻¹)`.
pub fn sample_gaussian_precision<R: Rng + ?Sized>(
    precision: &DMatrix<f64>,
    linear: &DVector<f64>,
    rng: &mut R,
) -> Result<DVector<f64>> {
    let s = GaussianPrecisionSampler::new(precision)?;
    if linear.len() != s.dim() {
        return Err(Error::domain("linear term length does not match the precision matrix"));
    }
    Ok(s.sample(linear, rng))
}

/// Periodic first differences of an `h × w` row-major image.
///
/// `D₁` differences along columns (vertical), `D₂` along rows (horizontal).
pub fn periodic_gradient(img: &[f64], h: usize, w: usize) -> Vec<f64> {
    let n = h * w;
    let mut out = vec![0.0; 2 * n];
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            out[i] = img[((r + 1) % h) * w + c] - img[i];
            out[n + i] = img[r * w + (c + 1) % w] - img[i];
        }
    }
    out
}

/// Adjoint `Dᵀ` of [`periodic_gradient`].
pub fn periodic_gradient_adjoint(g: &[f64], h: usize, w: usize) -> Vec<f64> {
    let n = h * w;
    let mut out = vec![0.0; n];
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            out[i] = g[((r + h - 1) % h) * w + c] - g[i] + g[n + r * w + (c + w - 1) % w] - g[n + i];
        }
    }
    out
}

/// Dense matrix of the stacked periodic gradient `D = [D₁; D₂]`.
pub fn periodic_gradient_matrix(h: usize, w: usize) -> DMatrix<f64> {
    let n = h * w;
    let mut d = DMatrix::zeros(2 * n, n);
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            d[(i, i)] -= 1.0;
            d[(i, ((r + 1) % h) * w + c)] += 1.0;
            d[(n + i, i)] -= 1.0;
            d[(n + i, r * w + (c + 1) % w)] += 1.0;
        }
    }
    d
}

/// Sampler for the precision `I/η + DᵀD/ρ²` on a periodic `h × w` grid,
/// diagonalized by the 2-D discrete Fourier transform.
#[derive(Clone)]
pub struct CirculantGradientSampler {
    h: usize,
    w: usize,
    eigen: Vec<f64>,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CirculantGradientSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CirculantGradientSampler")
            .field("h", &self.h)
            .field("w", &self.w)
            .finish_non_exhaustive()
    }
}

impl CirculantGradientSampler {
    pub fn new(h: usize, w: usize, eta: f64, rho: f64) -> Result<Self> {
        if h == 0 || w == 0 {
            return Err(Error::domain("image shape must be non-empty"));
        }
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::domain(format!("eta must be positive, got {eta}")));
        }
        if !(rho > 0.0) {
            return Err(Error::domain(format!("tolerance must be positive, got {rho}")));
        }
        let mut eigen = Vec::with_capacity(h * w);
        for k in 0..h {
            let sk = (std::f64::consts::PI * k as f64 / h as f64).sin();
            for l in 0..w {
                let sl = (std::f64::consts::PI * l as f64 / w as f64).sin();
                eigen.push(1.0 / eta + 4.0 * (sk * sk + sl * sl) / (rho * rho));
            }
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            h,
            w,
            eigen,
            row_fwd: planner.plan_fft_forward(w),
            row_inv: planner.plan_fft_inverse(w),
            col_fwd: planner.plan_fft_forward(h),
            col_inv: planner.plan_fft_inverse(h),
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.h, self.w)
    }

    /// Eigenvalues of the precision, row-major over frequencies.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen
    }

    fn fft2(&self, buf: &mut [Complex64], inverse: bool) {
        let (row, col) = if inverse {
            (&self.row_inv, &self.col_inv)
        } else {
            (&self.row_fwd, &self.col_fwd)
        };
        for r in buf.chunks_exact_mut(self.w) {
            row.process(r);
        }
        let mut column = vec![Complex64::new(0.0, 0.0); self.h];
        for c in 0..self.w {
            for r in 0..self.h {
                column[r] = buf[r * self.w + c];
            }
            col.process(&mut column);
            for r in 0..self.h {
                buf[r * self.w + c] = column[r];
            }
        }
    }

    fn solve_spectral(&self, b: &[f64], noise: Option<&[f64]>) -> Vec<f64> {
        let n = self.h * self.w;
        let mut fb: Vec<Complex64> = b.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft2(&mut fb, false);
        let fe = noise.map(|e| {
            let mut fe: Vec<Complex64> = e.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            self.fft2(&mut fe, false);
            fe
        });
        for i in 0..n {
            let lam = self.eigen[i];
            fb[i] /= lam;
            if let Some(fe) = &fe {
                fb[i] += fe[i] / lam.sqrt();
            }
        }
        self.fft2(&mut fb, true);
        fb.iter().map(|c| c.re / n as f64).collect()
    }

    /// `Q⁻¹ b`.
    pub fn mean(&self, linear: &[f64]) -> Result<Vec<f64>> {
        self.check_len(linear)?;
        Ok(self.solve_spectral(linear, None))
    }

    /// One draw from `N(Q⁻¹b, Q⁻¹)`.
    pub fn sample<R: Rng + ?Sized>(&self, linear: &[f64], rng: &mut R) -> Result<Vec<f64>> {
        self.check_len(linear)?;
        let eps: Vec<f64> = (0..linear.len()).map(|_| f64::std_normal(rng)).collect();
        Ok(self.solve_spectral(linear, Some(&eps)))
    }

    fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.h * self.w {
            return Err(Error::domain(format!(
                "expected {} pixels, got {}",
                self.h * self.w,
                v.len()
            )));
        }
        Ok(())
    }
}

/// One draw from the Gaussian with precision `I/η + DᵀD/ρ²` and linear term `b`.
pub fn sample_gaussian_circulant_fft<R: Rng + ?Sized>(
    shape: (usize, usize),
    eta: f64,
    rho: f64,
    linear: &[f64],
    rng: &mut R,
) -> Result<Vec<f64>> {
    CirculantGradientSampler::new(shape.0, shape.1, eta, rho)?.sample(linear, rng)
}
