//! Chain diagnostics.

use num_complex::Complex64;
use rand::Rng;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Effective sample size with Geyer's initial positive sequence truncation.
///
/// A constant series has ESS 1 by convention.
pub fn ess(series: &[f64]) -> Result<f64> {
    let n = series.len();
    if n < 10 {
        return Err(Error::domain(format!("ess needs at least 10 values, got {n}")));
    }
    let acf = autocorrelation(series);
    if acf.is_empty() {
        return Ok(1.0);
    }
    // τ = −1 + 2 Σ_m (ρ_{2m} + ρ_{2m+1}) while the pair sums stay positive
    let mut tau = -1.0;
    let mut m = 0;
    while 2 * m + 1 < n {
        let pair = acf[2 * m] + acf[2 * m + 1];
        if pair <= 0.0 {
            break;
        }
        tau += 2.0 * pair;
        m += 1;
    }
    Ok(n as f64 / tau.max(f64::MIN_POSITIVE))
}

/// Normalized autocorrelation `ρ̂_k`, `k = 0..n`; empty for a constant series.
pub fn autocorrelation(series: &[f64]) -> Vec<f64> {
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    let len = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex64> = series
        .iter()
        .map(|&x| Complex64::new(x - mean, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(len)
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut buf);
    for c in buf.iter_mut() {
        *c = Complex64::new(c.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let c0 = buf[0].re;
    if !(c0 > 1e-300 * n as f64) {
        return Vec::new();
    }
    buf[..n].iter().map(|c| c.re / c0).collect()
}

/// Monte Carlo estimate of a TV distance and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// `‖π − π_ρ‖_TV ≈ (1/n) Σ max(0, 1 − π_ρ(θᵢ)/π(θᵢ))` with `θᵢ ~ π`.
pub fn estimate_tv_mc<R, S, P, Q>(log_pi: P, log_pi_rho: Q, mut sampler_pi: S, n_samples: usize, rng: &mut R) -> TvEstimate
where
    R: Rng + ?Sized,
    S: FnMut(&mut R) -> Vec<f64>,
    P: Fn(&[f64]) -> f64,
    Q: Fn(&[f64]) -> f64,
{
    let mut sum = 0.0;
    let mut sum2 = 0.0;
    for _ in 0..n_samples {
        let th = sampler_pi(rng);
        let v = (-(log_pi_rho(&th) - log_pi(&th)).exp_m1()).max(0.0);
        sum += v;
        sum2 += v * v;
    }
    let n = n_samples.max(1) as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0);
    TvEstimate {
        value: mean,
        std_error: (var / n).sqrt(),
    }
}

/// Empirical `(1−α)`-quantile of potential values, the HPD threshold `γ_α`.
pub fn hpd_threshold(potential_values: &[f64], alpha: f64) -> Result<f64> {
    if potential_values.is_empty() {
        return Err(Error::domain("empty potential sequence"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let mut v = potential_values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let k = ((1.0 - alpha) * n as f64).ceil() as usize;
    Ok(v[k.clamp(1, n) - 1])
}
