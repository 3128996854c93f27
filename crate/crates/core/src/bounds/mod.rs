//! Non-asymptotic bounds between a target and its smoothed approximation.

mod parabolic;

pub use parabolic::{log_parabolic_cylinder, log_parabolic_integral, log_parabolic_ratio};

use nalgebra::{DMatrix, RealField};

use crate::error::{Error, Result};
use crate::kernels::{kernel_moment, KernelFamily};
use crate::scalar::Real;

/// Regularity constants of a potential `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityProfile<T> {
    pub d: usize,
    /// Lipschitz constant `L_f` of `f`.
    pub lipschitz: Option<T>,
    /// Lipschitz constant `M_f` of `∇f`.
    pub grad_lipschitz: Option<T>,
    /// `𝖬_f`, the second moment bound on `∇f`.
    pub grad_second_moment: Option<T>,
    pub convex: bool,
}

impl<T: Real> RegularityProfile<T> {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            lipschitz: None,
            grad_lipschitz: None,
            grad_second_moment: None,
            convex: false,
        }
    }

    pub fn with_lipschitz(mut self, l: T) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn with_smooth_convex(mut self, m: T, m2: T) -> Self {
        self.grad_lipschitz = Some(m);
        self.grad_second_moment = Some(m2);
        self.convex = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        for (name, v) in [
            ("lipschitz", self.lipschitz),
            ("grad_lipschitz", self.grad_lipschitz),
            ("grad_second_moment", self.grad_second_moment),
        ] {
            if let Some(v) = v {
                if !(v >= T::zero()) || !v.is_finite() {
                    return Err(Error::domain(format!("{name} must be finite and non-negative, got {v:?}")));
                }
            }
        }
        Ok(())
    }
}

/// One entry of a multi-split TV bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzBlock<T> {
    pub lipschitz: T,
    pub rho: T,
}

fn check_rho<T: Real>(rho: T) -> Result<()> {
    if !(rho >= T::zero()) || !rho.is_finite() {
        return Err(Error::domain(format!("tolerance must be finite and non-negative, got {rho:?}")));
    }
    Ok(())
}

fn dim<T: Real>(d: usize) -> Result<T> {
    if d == 0 {
        return Err(Error::domain("dimension must be positive"));
    }
    Ok(T::from_usize(d).expect("dimension representable"))
}

/// `log Δ_d(ρ) = log D_{−d}(Lρ) − log D_{−d}(−Lρ)` for one block.
fn log_delta<T: Real>(l: T, rho: T, d: T) -> Result<T> {
    if !(l >= T::zero()) || !l.is_finite() {
        return Err(Error::domain(format!("lipschitz constant must be finite and non-negative, got {l:?}")));
    }
    check_rho(rho)?;
    log_parabolic_ratio(d, l * rho)
}

/// TV bound for Lipschitz potentials split into blocks, `1 − ∏ Δ_d^{(j)}`.
///
/// A single block gives the one-split bound.
pub fn tv_bound_lipschitz<T: Real>(blocks: &[LipschitzBlock<T>], d: usize) -> Result<T> {
    if blocks.is_empty() {
        return Err(Error::domain("at least one block is required"));
    }
    let dd = dim::<T>(d)?;
    let mut log_prod = T::zero();
    for b in blocks {
        log_prod += log_delta(b.lipschitz, b.rho, dd)?;
    }
    Ok(clamp01(-log_prod.exp_m1()))
}

/// Small-ρ asymptote `2√2 Γ((d+1)/2)/Γ(d/2) · L ρ` of the Lipschitz bound.
pub fn tv_bound_lipschitz_asymptote<T: Real>(lipschitz: T, d: usize, rho: T) -> Result<T> {
    let dd = dim::<T>(d)?;
    let ratio = ((dd + T::one()) * T::half()).ln_gamma() - (dd * T::half()).ln_gamma();
    Ok(T::two() * T::SQRT_2() * ratio.exp() * lipschitz * rho)
}

/// Unclamped TV bound for smooth convex potentials,
/// `1 − (1+2ρ²M)^{−d/2}(1 − ρ⁴M𝖬/(1+2ρ²M))`.
pub fn tv_bound_smooth_convex_raw<T: Real>(rp: &RegularityProfile<T>, rho: T) -> Result<T> {
    rp.validate()?;
    check_rho(rho)?;
    let (m, m2) = match (rp.grad_lipschitz, rp.grad_second_moment, rp.convex) {
        (Some(m), Some(m2), true) => (m, m2),
        _ => {
            return Err(Error::Precondition(
                "smooth convex bound needs grad_lipschitz, grad_second_moment and convexity".into(),
            ))
        }
    };
    let dd = dim::<T>(rp.d)?;
    let r2m = rho * rho * m;
    let a = -(dd * T::half()) * (T::two() * r2m).ln_1p();
    let q = rho * rho * r2m * m2 / (T::one() + T::two() * r2m);
    // 1 − e^a (1 − q) = −expm1(a) + e^a q
    Ok(-a.exp_m1() + a.exp() * q)
}

/// Smooth convex TV bound clamped to `[0, 1]`.
pub fn tv_bound_smooth_convex<T: Real>(rp: &RegularityProfile<T>, rho: T) -> Result<T> {
    tv_bound_smooth_convex_raw(rp, rho).map(clamp01)
}

/// Small-ρ asymptote `ρ² d M_f` of the smooth convex bound.
pub fn tv_bound_smooth_convex_asymptote<T: Real>(rp: &RegularityProfile<T>, rho: T) -> Result<T> {
    let m = rp
        .grad_lipschitz
        .ok_or_else(|| Error::Precondition("grad_lipschitz is required".into()))?;
    Ok(rho * rho * dim::<T>(rp.d)? * m)
}

/// `W_p(π, π_ρ) ≤ ρ m_p`; `None` when the kernel moment is infinite.
pub fn wasserstein_bound<T: Real>(k: KernelFamily, d: usize, p: u32, rho: T) -> Option<T> {
    if rho == T::zero() {
        return Some(T::zero());
    }
    kernel_moment::<T>(k, d, p).map(|m| rho * m)
}

fn log_n_rho<T: Real>(l: T, dd: T, rho: T) -> T {
    (dd * T::half() - T::one()) * T::LN_2() + (dd * T::half()).ln_gamma() - dd.ln_gamma()
        - l * l * rho * rho / T::c(4.0)
}

/// Bounds `(L_ρ, U_ρ)` on the potential gap `f_ρ − f` for a Lipschitz `f`.
pub fn potential_gap_bounds<T: Real>(lipschitz: T, d: usize, rho: T) -> Result<(T, T)> {
    let dd = dim::<T>(d)?;
    if !(lipschitz >= T::zero()) || !lipschitz.is_finite() {
        return Err(Error::domain(format!("lipschitz constant must be finite and non-negative, got {lipschitz:?}")));
    }
    check_rho(rho)?;
    let z = lipschitz * rho;
    if z == T::zero() {
        return Ok((T::zero(), T::zero()));
    }
    let log_n = log_n_rho(lipschitz, dd, rho);
    let lo = log_n - log_parabolic_cylinder(dd, -z)?;
    let hi = log_n - log_parabolic_cylinder(dd, z)?;
    Ok((lo, hi))
}

/// Interval containing the π-mass of any `(1−α)` credible region of π_ρ.
pub fn coverage_interval<T: Real>(lipschitz: T, d: usize, rho: T, alpha: T) -> Result<(T, T)> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha:?}")));
    }
    let (lo, hi) = potential_gap_bounds(lipschitz, d, rho)?;
    let level = T::one() - alpha;
    Ok((level * lo.exp(), (level * hi.exp()).min(T::one())))
}

/// Leading term `(ρ/2) Tr(H_π H_div⁻¹)` of the pointwise bias `π_ρ − π`.
pub fn bregman_bias_leading<T: Real + RealField>(hessian_pi: &DMatrix<T>, hessian_div: &DMatrix<T>, rho: T) -> Result<T> {
    let n = hessian_div.nrows();
    if hessian_div.ncols() != n || hessian_pi.nrows() != n || hessian_pi.ncols() != n {
        return Err(Error::domain("hessians must be square matrices of equal size"));
    }
    let chol = hessian_div
        .clone()
        .cholesky()
        .ok_or_else(|| Error::domain("divergence hessian is not positive definite"))?;
    let x = chol.solve(hessian_pi);
    Ok(<T as Real>::half() * rho * x.trace())
}

/// Every bound available for a regularity profile at one tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport<T> {
    pub rho: T,
    pub tv_lipschitz: Option<T>,
    pub tv_lipschitz_asymptote: Option<T>,
    pub tv_smooth: Option<T>,
    /// Unclamped value of `tv_smooth`.
    pub tv_smooth_raw: Option<T>,
    pub tv_smooth_asymptote: Option<T>,
    pub wasserstein_p: Option<T>,
    pub potential_gap: Option<(T, T)>,
    pub coverage: Option<(T, T)>,
}

impl<T: Real> BoundReport<T> {
    /// Evaluates the bounds whose constants are present in `rp`.
    ///
    /// The Wasserstein bound uses the Gaussian kernel of order `p`; the
    /// coverage interval is filled when `alpha` is given.
    pub fn evaluate(rp: &RegularityProfile<T>, rho: T, p: u32, alpha: Option<T>) -> Result<Self> {
        rp.validate()?;
        check_rho(rho)?;
        let mut r = BoundReport {
            rho,
            tv_lipschitz: None,
            tv_lipschitz_asymptote: None,
            tv_smooth: None,
            tv_smooth_raw: None,
            tv_smooth_asymptote: None,
            wasserstein_p: wasserstein_bound(KernelFamily::Gaussian, rp.d, p, rho),
            potential_gap: None,
            coverage: None,
        };
        if let Some(l) = rp.lipschitz {
            r.tv_lipschitz = Some(tv_bound_lipschitz(&[LipschitzBlock { lipschitz: l, rho }], rp.d)?);
            r.tv_lipschitz_asymptote = Some(tv_bound_lipschitz_asymptote(l, rp.d, rho)?);
            r.potential_gap = Some(potential_gap_bounds(l, rp.d, rho)?);
            if let Some(a) = alpha {
                r.coverage = Some(coverage_interval(l, rp.d, rho, a)?);
            }
        }
        if rp.convex && rp.grad_lipschitz.is_some() && rp.grad_second_moment.is_some() {
            let raw = tv_bound_smooth_convex_raw(rp, rho)?;
            r.tv_smooth_raw = Some(raw);
            r.tv_smooth = Some(clamp01(raw));
            r.tv_smooth_asymptote = Some(tv_bound_smooth_convex_asymptote(rp, rho)?);
        }
        Ok(r)
    }
}

fn clamp01<T: Real>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}
