use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_real_line, QuadOptions};
use crate::scalar::Real;

/// Univariate symmetric kernels; multivariate kernels are coordinate-wise products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelFamily {
    Gaussian,
    Cauchy,
    Laplace,
    Dirichlet,
    Uniform,
    Triangular,
    Epanechnikov,
}

impl KernelFamily {
    pub const ALL: [KernelFamily; 7] = [
        KernelFamily::Gaussian,
        KernelFamily::Cauchy,
        KernelFamily::Laplace,
        KernelFamily::Dirichlet,
        KernelFamily::Uniform,
        KernelFamily::Triangular,
        KernelFamily::Epanechnikov,
    ];

    /// Kernels with a finite second moment.
    pub const FINITE_MOMENT: [KernelFamily; 5] = [
        KernelFamily::Gaussian,
        KernelFamily::Laplace,
        KernelFamily::Uniform,
        KernelFamily::Triangular,
        KernelFamily::Epanechnikov,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::Gaussian => "gaussian",
            KernelFamily::Cauchy => "cauchy",
            KernelFamily::Laplace => "laplace",
            KernelFamily::Dirichlet => "dirichlet",
            KernelFamily::Uniform => "uniform",
            KernelFamily::Triangular => "triangular",
            KernelFamily::Epanechnikov => "epanechnikov",
        }
    }

    /// Support is `[-1, 1]`.
    pub fn is_compact(self) -> bool {
        matches!(self, KernelFamily::Uniform | KernelFamily::Triangular | KernelFamily::Epanechnikov)
    }

    /// `log K(u)`, `-inf` outside the support.
    pub fn log_density<T: Real>(self, u: T) -> T {
        let a = u.abs();
        if self.is_compact() && a > T::one() {
            return T::neg_infinity();
        }
        match self {
            KernelFamily::Gaussian => -T::half() * u * u - T::half() * (T::two() * T::PI()).ln(),
            KernelFamily::Cauchy => -(T::PI() * (T::one() + u * u)).ln(),
            KernelFamily::Laplace => -a - T::LN_2(),
            KernelFamily::Dirichlet => {
                if a < T::c(1e-4) {
                    let r = T::one() - u * u / T::c(6.0);
                    T::two() * r.ln() - T::PI().ln()
                } else {
                    T::two() * (u.sin().abs() / a).ln() - T::PI().ln()
                }
            }
            KernelFamily::Uniform => -T::LN_2(),
            KernelFamily::Triangular => (T::one() - a).ln(),
            KernelFamily::Epanechnikov => (T::c(0.75) * (T::one() - u * u)).ln(),
        }
    }

    pub fn density<T: Real>(self, u: T) -> T {
        self.log_density(u).exp()
    }

    /// Univariate variance `∫u²K(u)du`; `None` when infinite.
    pub fn variance_1d(self) -> Option<f64> {
        match self {
            KernelFamily::Gaussian => Some(1.0),
            KernelFamily::Laplace => Some(2.0),
            KernelFamily::Uniform => Some(1.0 / 3.0),
            KernelFamily::Triangular => Some(1.0 / 6.0),
            KernelFamily::Epanechnikov => Some(1.0 / 5.0),
            KernelFamily::Cauchy | KernelFamily::Dirichlet => None,
        }
    }

    pub fn has_sampler(self) -> bool {
        !matches!(self, KernelFamily::Dirichlet)
    }

    /// One standardized draw `u ~ K`.
    pub fn sample<T: Real, R: Rng + ?Sized>(self, rng: &mut R) -> Result<T> {
        let sym = |rng: &mut R| T::two() * T::unit(rng) - T::one();
        Ok(match self {
            KernelFamily::Gaussian => T::std_normal(rng),
            KernelFamily::Cauchy => {
                let num = T::std_normal(rng);
                let mut den = T::std_normal(rng);
                while den == T::zero() {
                    den = T::std_normal(rng);
                }
                num / den
            }
            KernelFamily::Laplace => {
                let e = -(T::one() - T::unit(rng)).ln();
                if T::unit(rng) < T::half() {
                    -e
                } else {
                    e
                }
            }
            KernelFamily::Uniform => sym(rng),
            KernelFamily::Triangular => T::unit(rng) + T::unit(rng) - T::one(),
            KernelFamily::Epanechnikov => {
                let (u1, u2, u3) = (sym(rng), sym(rng), sym(rng));
                if u3.abs() >= u2.abs() && u3.abs() >= u1.abs() {
                    u2
                } else {
                    u3
                }
            }
            KernelFamily::Dirichlet => {
                return Err(Error::unsupported("the Dirichlet kernel has no sampler"));
            }
        })
    }
}

const MC_MOMENT_DRAWS: usize = 200_000;
const MC_MOMENT_SEED: u64 = 0x6d70_6d6f_6d65_6e74;

/// `m_p = (∫‖u‖₂^p K(u) du)^{1/p}` for the product kernel in dimension `d`.
///
/// Closed form for `p = 2`, adaptive quadrature for `d = 1`, Monte Carlo
/// otherwise. Kernels without finite moments of order `p ≥ 1` (Cauchy,
/// Dirichlet) return `None`.
pub fn kernel_moment<T: Real>(k: KernelFamily, d: usize, p: u32) -> Option<T> {
    let var = k.variance_1d()?;
    if d == 0 || p == 0 {
        return None;
    }
    if p == 2 {
        return Some(T::c((d as f64 * var).sqrt()));
    }
    let pf = p as f64;
    let raw = if d == 1 {
        let opts = QuadOptions { rel_tol: 1e-12, ..Default::default() };
        let f = |u: f64| u.abs().powf(pf) * k.density(u);
        let (v, _) = if k.is_compact() {
            let (l, el) = integrate(f, -1.0, 0.0, opts).ok()?;
            let (r, er) = integrate(f, 0.0, 1.0, opts).ok()?;
            (l + r, el + er)
        } else {
            integrate_real_line(f, 0.0, opts).ok()?
        };
        v
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(MC_MOMENT_SEED ^ (d as u64) << 8 ^ p as u64);
        let mut acc = 0.0;
        for _ in 0..MC_MOMENT_DRAWS {
            let mut sq = 0.0;
            for _ in 0..d {
                let u: f64 = k.sample(&mut rng).ok()?;
                sq += u * u;
            }
            acc += sq.powf(pf / 2.0);
        }
        acc / MC_MOMENT_DRAWS as f64
    };
    Some(T::c(raw.powf(1.0 / pf)))
}
