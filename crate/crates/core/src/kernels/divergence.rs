use crate::error::{Error, Result};
use crate::scalar::Real;

/// Divergence functions `φ(z, θ)` usable as smoothing potentials.
///
/// `SquaredLoss` is the Bregman divergence of `ψ(z) = z²/2`, i.e.
/// `(z − θ)²/2`, so that `exp(−φ/ρ)` is the Gaussian with variance `ρ`.
/// `AbsoluteLoss` is not a Bregman divergence but is accepted as a generic
/// divergence source. `KullbackLeibler` is the unnormalized form `z log(z/θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DivergenceFamily {
    SquaredLoss,
    AbsoluteLoss,
    LogisticLoss,
    ItakuraSaito,
    KullbackLeibler,
}

impl DivergenceFamily {
    pub const ALL: [DivergenceFamily; 5] = [
        DivergenceFamily::SquaredLoss,
        DivergenceFamily::AbsoluteLoss,
        DivergenceFamily::LogisticLoss,
        DivergenceFamily::ItakuraSaito,
        DivergenceFamily::KullbackLeibler,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DivergenceFamily::SquaredLoss => "squared",
            DivergenceFamily::AbsoluteLoss => "absolute",
            DivergenceFamily::LogisticLoss => "logistic",
            DivergenceFamily::ItakuraSaito => "itakura-saito",
            DivergenceFamily::KullbackLeibler => "kullback-leibler",
        }
    }

    /// Closed z-domain `(lo, hi)` (possibly infinite).
    pub fn z_domain(self) -> (f64, f64) {
        match self {
            DivergenceFamily::SquaredLoss | DivergenceFamily::AbsoluteLoss => (f64::NEG_INFINITY, f64::INFINITY),
            DivergenceFamily::LogisticLoss | DivergenceFamily::KullbackLeibler => (0.0, 1.0),
            DivergenceFamily::ItakuraSaito => (0.0, f64::INFINITY),
        }
    }

    pub fn z_in_domain<T: Real>(self, z: T) -> bool {
        let (lo, hi) = self.z_domain();
        z.is_finite() && z >= T::c(lo) && z <= T::c(hi)
    }

    /// θ must lie in the interior for the divergence to be finite.
    pub fn theta_in_domain<T: Real>(self, theta: T) -> bool {
        match self {
            DivergenceFamily::SquaredLoss | DivergenceFamily::AbsoluteLoss => theta.is_finite(),
            DivergenceFamily::LogisticLoss => theta > T::zero() && theta < T::one(),
            DivergenceFamily::ItakuraSaito => theta > T::zero() && theta.is_finite(),
            DivergenceFamily::KullbackLeibler => theta > T::zero() && theta <= T::one(),
        }
    }

    /// Scalar `φ(z, θ)`; `+inf` on the boundary where the divergence blows up.
    pub fn eval<T: Real>(self, z: T, theta: T) -> Result<T> {
        if !self.z_in_domain(z) || !self.theta_in_domain(theta) {
            return Err(Error::domain(format!(
                "{} divergence undefined at z={z:?}, theta={theta:?}",
                self.name()
            )));
        }
        // x log(x/y) with the 0 log 0 = 0 convention
        let xlogy = |x: T, y: T| if x == T::zero() { T::zero() } else { x * (x / y).ln() };
        Ok(match self {
            DivergenceFamily::SquaredLoss => T::half() * (z - theta) * (z - theta),
            DivergenceFamily::AbsoluteLoss => (z - theta).abs(),
            DivergenceFamily::LogisticLoss => xlogy(z, theta) + xlogy(T::one() - z, T::one() - theta),
            DivergenceFamily::ItakuraSaito => {
                if z == T::zero() {
                    T::infinity()
                } else {
                    let r = z / theta;
                    r - r.ln() - T::one()
                }
            }
            DivergenceFamily::KullbackLeibler => xlogy(z, theta),
        })
    }
}

/// Coordinate-wise sum `Σ_i φ(z_i, θ_i)`.
pub fn eval_bregman<T: Real>(df: DivergenceFamily, z: &[T], theta: &[T]) -> Result<T> {
    if z.len() != theta.len() {
        return Err(Error::domain(format!("dimension mismatch: {} vs {}", z.len(), theta.len())));
    }
    z.iter().zip(theta).try_fold(T::zero(), |acc, (&zi, &ti)| Ok(acc + df.eval(zi, ti)?))
}
