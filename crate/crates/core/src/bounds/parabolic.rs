//! Parabolic cylinder function `D_{−d}(z)` in the log domain.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `log ∫₀^∞ exp(−x z − x²/2) x^{d−1} dx`.
///
/// The integral is taken in `s = log x`, where the integrand
/// `exp(d s − z eˢ − e^{2s}/2)` is smooth and unimodal for every `d > 0`,
/// with a trapezoid rule on a mode-centred grid accumulated by log-sum-exp.
pub fn log_parabolic_integral<T: Real>(d: T, z: T) -> Result<T> {
    if !(d > T::zero()) || !d.is_finite() {
        return Err(Error::domain(format!("order must be positive, got {d:?}")));
    }
    if !z.is_finite() {
        return Err(Error::domain(format!("argument must be finite, got {z:?}")));
    }
    let four = T::c(4.0);
    let root = (z * z + four * d).sqrt();
    // positive root of x² + z x − d, written without cancellation
    let x_mode = if z > T::zero() {
        T::two() * d / (z + root)
    } else {
        T::half() * (root - z)
    };
    let s_mode = x_mode.ln();
    let g = |s: T| {
        let x = s.exp();
        d * s - z * x - T::half() * x * x
    };
    let g_mode = g(s_mode);
    let sigma = (d + x_mode * x_mode).sqrt().recip();
    let h = sigma / T::c(8.0);
    let drop = T::c(50.0);

    let mut acc = T::zero();
    let mut comp = T::zero();
    let mut add = |v: T| {
        // Kahan summation keeps the ratio of nearby integrals accurate
        let y = v - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    };
    add(T::one());
    for dir in [T::one(), -T::one()] {
        let mut k = 1usize;
        loop {
            let s = s_mode + dir * h * T::c(k as f64);
            let gv = g(s) - g_mode;
            add(gv.exp());
            if gv < -drop {
                break;
            }
            k += 1;
            if k > 50_000_000 {
                return Err(Error::Numeric("parabolic cylinder grid did not terminate".into()));
            }
        }
    }
    Ok(g_mode + acc.ln() + h.ln())
}

/// `log D_{−d}(z)` for `d > 0`.
pub fn log_parabolic_cylinder<T: Real>(d: T, z: T) -> Result<T> {
    let li = log_parabolic_integral(d, z)?;
    Ok(-z * z / T::c(4.0) - d.ln_gamma() + li)
}

/// `log [D_{−d}(z) / D_{−d}(−z)]`; the Gaussian prefactors cancel.
pub fn log_parabolic_ratio<T: Real>(d: T, z: T) -> Result<T> {
    if z == T::zero() {
        if !(d > T::zero()) {
            return Err(Error::domain(format!("order must be positive, got {d:?}")));
        }
        return Ok(T::zero());
    }
    Ok(log_parabolic_integral(d, z)? - log_parabolic_integral(d, -z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_semi_infinite, QuadOptions};
    use approx::assert_relative_eq;

    fn oracle(d: f64, z: f64) -> f64 {
        let (v, _) = integrate_semi_infinite(
            |x: f64| if x <= 0.0 { 0.0 } else { (-x * z - x * x / 2.0 + (d - 1.0) * x.ln()).exp() },
            0.0,
            QuadOptions { rel_tol: 1e-13, ..Default::default() },
        )
        .unwrap();
        v.ln()
    }

    #[test]
    fn origin_closed_form() {
        for &d in &[0.5_f64, 1.0, 2.0, 3.0, 10.0, 57.5] {
            let want = (d / 2.0 - 1.0) * 2.0_f64.ln() + libm::lgamma(d / 2.0) - libm::lgamma(d);
            assert_relative_eq!(log_parabolic_cylinder(d, 0.0).unwrap(), want, epsilon = 1e-12, max_relative = 1e-13);
        }
    }

    #[test]
    fn matches_direct_quadrature() {
        for &d in &[1.0_f64, 1.5, 2.0, 5.0, 20.0] {
            for &z in &[-3.0_f64, -0.4, 0.1, 2.0, 6.0] {
                assert_relative_eq!(log_parabolic_integral(d, z).unwrap(), oracle(d, z), epsilon = 1e-10, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn small_order_singularity() {
        // d < 1 makes the x-integrand singular at 0
        let d = 0.3_f64;
        let z = 1.0;
        let (v, _) = integrate_semi_infinite(
            |t: f64| if t <= 0.0 { 0.0 } else { (-t.powf(1.0 / d) * z - t.powf(2.0 / d) / 2.0).exp() / d },
            0.0,
            QuadOptions { rel_tol: 1e-13, ..Default::default() },
        )
        .unwrap();
        assert_relative_eq!(log_parabolic_integral(d, z).unwrap(), v.ln(), max_relative = 1e-10);
    }

    #[test]
    fn ratio_near_origin() {
        let z = 0.01_f64;
        let r = log_parabolic_ratio(1.0_f64, z).unwrap().exp();
        let lin = 1.0 - 2.0 * 2.0_f64.sqrt() / std::f64::consts::PI.sqrt() * z;
        assert!((r - lin).abs() < 2e-4, "{r} vs {lin}");
        // D_{-1}(z) = e^{z²/4} √(π/2) erfc(z/√2)
        let s2 = std::f64::consts::SQRT_2;
        assert_relative_eq!(r, libm::erfc(z / s2) / libm::erfc(-z / s2), max_relative = 1e-13);
        assert_relative_eq!(r, (oracle(1.0, z) - oracle(1.0, -z)).exp(), max_relative = 1e-12);
    }

    #[test]
    fn monotone_in_argument() {
        let a = log_parabolic_cylinder(10.0_f64, 1.0).unwrap();
        let b = log_parabolic_cylinder(10.0_f64, 0.0).unwrap();
        let c = log_parabolic_cylinder(10.0_f64, -1.0).unwrap();
        assert!(a < b && b < c);
    }

    #[test]
    fn extreme_orders_are_finite() {
        for &d in &[1e4_f64, 1e6] {
            for &z in &[-1e3_f64, -1.0, 0.0, 1.0, 1e3] {
                assert!(log_parabolic_cylinder(d, z).unwrap().is_finite());
            }
        }
        assert!(log_parabolic_cylinder(0.0_f64, 1.0).is_err());
    }

    #[test]
    fn single_precision() {
        let v = log_parabolic_cylinder(2.0_f32, 0.0).unwrap();
        assert!(v.abs() < 1e-5);
    }
}
