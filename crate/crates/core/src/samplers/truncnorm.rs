use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Draw from `N(0, 1)` restricted to `[a, ∞)`.
///
/// Plain rejection below `a = 0.3`, Robert's exponential proposal above.
pub fn sample_std_normal_tail<T: Real, R: Rng + ?Sized>(a: T, rng: &mut R) -> T {
    if a < T::c(0.3) {
        loop {
            let x = T::std_normal(rng);
            if x >= a {
                return x;
            }
        }
    }
    let lambda = T::half() * (a + (a * a + T::c(4.0)).sqrt());
    loop {
        let x = a - (T::one() - T::unit(rng)).ln() / lambda;
        let d = x - lambda;
        if T::unit(rng) <= (-T::half() * d * d).exp() {
            return x;
        }
    }
}

/// Draw from `N(μ, σ²)` restricted to `[lo, ∞)` or `(−∞, hi]`.
pub fn sample_truncated_normal<T: Real, R: Rng + ?Sized>(
    mu: T,
    sigma: T,
    bound: T,
    upper_tail: bool,
    rng: &mut R,
) -> Result<T> {
    if !(sigma > T::zero()) || !sigma.is_finite() || !mu.is_finite() {
        return Err(Error::domain(format!("invalid truncated normal parameters mu={mu:?}, sigma={sigma:?}")));
    }
    let a = (bound - mu) / sigma;
    Ok(if upper_tail {
        mu + sigma * sample_std_normal_tail(a, rng)
    } else {
        mu - sigma * sample_std_normal_tail(-a, rng)
    })
}
