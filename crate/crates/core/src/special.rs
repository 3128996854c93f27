//! Small special-function helpers evaluated in the log domain.

use crate::scalar::Real;

/// `log(exp(a) + exp(b))` without overflow.
pub fn log_add_exp<T: Real>(a: T, b: T) -> T {
    if a == T::neg_infinity() {
        return b;
    }
    if b == T::neg_infinity() {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// `log Σ exp(x_i)`; `-inf` for an empty slice.
pub fn log_sum_exp<T: Real>(xs: &[T]) -> T {
    let m = xs.iter().copied().fold(T::neg_infinity(), T::max);
    if m == T::neg_infinity() || m == T::infinity() {
        return m;
    }
    let s = xs.iter().fold(T::zero(), |acc, &x| acc + (x - m).exp());
    m + s.ln()
}

/// `log erfcx(x) = x² + log erfc(x)`, finite for every real `x`.
pub fn log_erfcx<T: Real>(x: T) -> T {
    if x < T::c(4.0) {
        // erfc is well away from underflow here, and for negative x the x²
        // term carries the growth exactly.
        return x * x + x.erfc().ln();
    }
    // Continued fraction erfcx(x) = 1/√π · 1/(x + ½/(x + 1/(x + 3/2/(x + …)))).
    let mut t = x;
    for k in (1..=60).rev() {
        t = x + T::c(0.5 * k as f64) / t;
    }
    -(T::PI().sqrt() * t).ln()
}

/// `log Φ(x)` for the standard normal CDF Φ.
pub fn log_ndtr<T: Real>(x: T) -> T {
    if x > T::zero() {
        return (-T::half() * (x / T::SQRT_2()).erfc()).ln_1p();
    }
    let u = -x / T::SQRT_2();
    log_erfcx(u) - u * u - T::LN_2()
}

/// Standard normal CDF.
pub fn ndtr<T: Real>(x: T) -> T {
    T::half() * (-x / T::SQRT_2()).erfc()
}

/// `log Γ(x)`.
#[inline]
pub fn ln_gamma<T: Real>(x: T) -> T {
    x.ln_gamma()
}
