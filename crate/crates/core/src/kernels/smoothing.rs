use std::collections::HashMap;
use std::sync::Mutex;

use rand::Rng;

use super::{DivergenceFamily, KernelFamily};
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadOptions};
use crate::scalar::Real;

/// Where the coupling density comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SmoothingSource {
    /// `κ_ρ(z, θ) ∝ ρ^{-d} K((θ − z)/ρ)`.
    Kernel(KernelFamily),
    /// `κ_ρ(z, θ) ∝ exp(−φ(z, θ)/ρ)`.
    Divergence(DivergenceFamily),
}

/// The coupling density `κ_ρ(z, θ)` in dimension `dim`, normalized in `z`.
///
/// Normalizers of divergence sources that depend on θ and have no closed
/// form are computed by quadrature and cached per coordinate value of θ.
#[derive(Debug)]
pub struct SmoothingDensity<T: Real> {
    source: SmoothingSource,
    rho: T,
    dim: usize,
    cache: Mutex<HashMap<u64, T>>,
}

impl<T: Real> Clone for SmoothingDensity<T> {
    fn clone(&self) -> Self {
        Self {
            source: self.source,
            rho: self.rho,
            dim: self.dim,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl<T: Real> PartialEq for SmoothingDensity<T> {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.rho == other.rho && self.dim == other.dim
    }
}

impl<T: Real> SmoothingDensity<T> {
    pub fn new(source: SmoothingSource, rho: T, dim: usize) -> Result<Self> {
        if !(rho > T::zero()) || !rho.is_finite() {
            return Err(Error::domain(format!("tolerance must be positive and finite, got {rho:?}")));
        }
        if dim == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        Ok(Self {
            source,
            rho,
            dim,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn gaussian(rho: T, dim: usize) -> Result<Self> {
        Self::new(SmoothingSource::Kernel(KernelFamily::Gaussian), rho, dim)
    }

    pub fn source(&self) -> SmoothingSource {
        self.source
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Per-coordinate variance of `z − θ` when the source is a kernel with
    /// finite second moment (`ρ²·var K`).
    pub fn kernel_variance(&self) -> Option<T> {
        match self.source {
            SmoothingSource::Kernel(k) => k.variance_1d().map(|v| T::c(v) * self.rho * self.rho),
            SmoothingSource::Divergence(_) => None,
        }
    }

    fn check_dims(&self, z: &[T], theta: &[T]) -> Result<()> {
        if z.len() != self.dim || theta.len() != self.dim {
            return Err(Error::domain(format!(
                "expected vectors of length {}, got z: {}, theta: {}",
                self.dim,
                z.len(),
                theta.len()
            )));
        }
        Ok(())
    }

    /// Normalized `log κ_ρ(z, θ)`.
    pub fn eval_log_kappa(&self, z: &[T], theta: &[T]) -> Result<T> {
        self.check_dims(z, theta)?;
        match self.source {
            SmoothingSource::Kernel(k) => {
                let log_rho = self.rho.ln();
                Ok(z.iter().zip(theta).fold(T::zero(), |acc, (&zi, &ti)| {
                    acc + k.log_density((ti - zi) / self.rho) - log_rho
                }))
            }
            SmoothingSource::Divergence(df) => {
                let mut acc = T::zero();
                for (&zi, &ti) in z.iter().zip(theta) {
                    let phi = df.eval(zi, ti)?;
                    acc += -phi / self.rho - self.log_normalizer_1d(df, ti)?;
                }
                Ok(acc)
            }
        }
    }

    /// `log ∫ exp(−φ(z, θ)/ρ) dz` over the z-domain of `df`.
    pub fn log_normalizer_1d(&self, df: DivergenceFamily, theta: T) -> Result<T> {
        let rho = self.rho;
        match df {
            DivergenceFamily::SquaredLoss => Ok(T::half() * (T::two() * T::PI() * rho).ln()),
            DivergenceFamily::AbsoluteLoss => Ok((T::two() * rho).ln()),
            DivergenceFamily::ItakuraSaito => {
                if !df.theta_in_domain(theta) {
                    return Err(Error::domain(format!("itakura-saito requires theta > 0, got {theta:?}")));
                }
                // θ e^{1/ρ} Γ(1/ρ + 1) ρ^{1/ρ + 1}
                let a = rho.recip();
                Ok(theta.ln() + a + (a + T::one()).ln_gamma() + (a + T::one()) * rho.ln())
            }
            DivergenceFamily::LogisticLoss | DivergenceFamily::KullbackLeibler => {
                if !df.theta_in_domain(theta) {
                    return Err(Error::domain(format!("{} undefined at theta={theta:?}", df.name())));
                }
                let key = theta.to_f64().unwrap_or(f64::NAN).to_bits() ^ (df as u64).rotate_left(61);
                if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
                    return Ok(*v);
                }
                let v = self.quadrature_log_normalizer(df, theta)?;
                self.cache.lock().expect("cache lock").insert(key, v);
                Ok(v)
            }
        }
    }

    fn quadrature_log_normalizer(&self, df: DivergenceFamily, theta: T) -> Result<T> {
        let rho = self.rho;
        // minimizer of φ(·, θ) on [0, 1]
        let (z_min, phi_min) = match df {
            DivergenceFamily::LogisticLoss => (theta, T::zero()),
            _ => {
                let zm = theta / T::E();
                (zm, -zm)
            }
        };
        let opts = QuadOptions { rel_tol: 1e-10, ..Default::default() };
        let f = |z: T| match df.eval(z, theta) {
            Ok(phi) => (-(phi - phi_min) / rho).exp(),
            Err(_) => T::zero(),
        };
        let (left, _) = integrate(f, T::zero(), z_min, opts)
            .map_err(|e| Error::unsupported(format!("normalizer quadrature failed: {e}")))?;
        let (right, _) = integrate(f, z_min, T::one(), opts)
            .map_err(|e| Error::unsupported(format!("normalizer quadrature failed: {e}")))?;
        let total = left + right;
        if !(total > T::zero()) || !total.is_finite() {
            return Err(Error::unsupported(format!("{} smoothing is not normalizable", df.name())));
        }
        Ok(total.ln() - phi_min / rho)
    }

    /// One draw `z ~ κ_ρ(·, θ)` with independent coordinates.
    pub fn sample_kappa<R: Rng + ?Sized>(&self, theta: &[T], rng: &mut R) -> Result<Vec<T>> {
        if theta.len() != self.dim {
            return Err(Error::domain(format!("expected theta of length {}, got {}", self.dim, theta.len())));
        }
        match self.source {
            SmoothingSource::Kernel(k) => {
                if !k.has_sampler() {
                    return Err(Error::unsupported(format!("no sampler for the {} kernel", k.name())));
                }
                theta.iter().map(|&t| Ok(t + self.rho * k.sample::<T, R>(rng)?)).collect()
            }
            SmoothingSource::Divergence(DivergenceFamily::SquaredLoss) => {
                let sd = self.rho.sqrt();
                Ok(theta.iter().map(|&t| t + sd * T::std_normal(rng)).collect())
            }
            SmoothingSource::Divergence(df) => Err(Error::unsupported(format!(
                "no sampler for the {} divergence",
                df.name()
            ))),
        }
    }
}
