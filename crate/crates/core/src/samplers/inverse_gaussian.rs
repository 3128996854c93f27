use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// One draw from the inverse Gaussian distribution `IG(μ, λ)`.
///
/// Michael, Schucany and Haas transformation with a uniform correction.
pub fn sample_inverse_gaussian<T: Real, R: Rng + ?Sized>(mu: T, lambda: T, rng: &mut R) -> Result<T> {
    if !(mu > T::zero() && lambda > T::zero()) || !mu.is_finite() || !lambda.is_finite() {
        return Err(Error::domain(format!(
            "inverse gaussian needs positive finite parameters, got mu={mu:?}, lambda={lambda:?}"
        )));
    }
    let nu = T::std_normal(rng);
    let y = nu * nu;
    let my = mu * y;
    // x = μ + μ²y/(2λ) − μ/(2λ)·√(4μλy + μ²y²), rearranged to avoid cancellation
    let x = mu - T::two() * mu * my / ((T::c(4.0) * lambda * my + my * my).sqrt() + my);
    let x = if x > T::zero() { x } else { T::min_positive_value() };
    let u = T::unit(rng);
    if u <= mu / (mu + x) {
        Ok(x)
    } else {
        Ok(mu * mu / x)
    }
}

/// CDF of `IG(μ, λ)`.
pub fn inverse_gaussian_cdf(mu: f64, lambda: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let s = (lambda / x).sqrt();
    let a = crate::special::ndtr(s * (x / mu - 1.0));
    let b = (2.0 * lambda / mu + crate::special::log_ndtr(-s * (x / mu + 1.0))).exp();
    a + b
}
