//! Generalized lasso posterior `exp(−‖y − Xθ‖²/(2σ²) − τ‖Bθ‖₁)`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::linear::{L1Block, LinearBlock, LinearSplitModel};
use crate::bounds::{coverage_interval, potential_gap_bounds};
use crate::error::{Error, Result};
use crate::special::{log_add_exp, log_erfcx};

#[derive(Debug, Clone, PartialEq)]
pub struct LassoTarget {
    pub y: DVector<f64>,
    pub x: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub tau: f64,
    pub sigma: f64,
}

impl LassoTarget {
    pub fn new(y: DVector<f64>, x: DMatrix<f64>, b: DMatrix<f64>, tau: f64, sigma: f64) -> Result<Self> {
        if x.nrows() != y.len() || b.ncols() != x.ncols() {
            return Err(Error::domain(format!(
                "inconsistent lasso dimensions: y {}, X {}x{}, B {}x{}",
                y.len(),
                x.nrows(),
                x.ncols(),
                b.nrows(),
                b.ncols()
            )));
        }
        if !(tau >= 0.0) || !(sigma > 0.0) {
            return Err(Error::domain("tau must be non-negative and sigma positive"));
        }
        Ok(Self { y, x, b, tau, sigma })
    }

    /// Scalar problem with `B = 1`.
    pub fn univariate(y: f64, x: f64, tau: f64, sigma: f64) -> Result<Self> {
        Self::new(
            DVector::from_element(1, y),
            DMatrix::from_element(1, 1, x),
            DMatrix::from_element(1, 1, 1.0),
            tau,
            sigma,
        )
    }

    pub fn dim(&self) -> usize {
        self.x.ncols()
    }

    /// `g(θ) = τ‖Bθ‖₁`.
    pub fn prior_potential(&self, theta: &[f64]) -> f64 {
        let bt = &self.b * DVector::from_column_slice(theta);
        self.tau * bt.iter().map(|v| v.abs()).sum::<f64>()
    }

    /// `‖y − Xθ‖²/(2σ²)`.
    pub fn likelihood_potential(&self, theta: &[f64]) -> f64 {
        let r = &self.y - &self.x * DVector::from_column_slice(theta);
        r.norm_squared() / (2.0 * self.sigma * self.sigma)
    }

    pub fn potential(&self, theta: &[f64]) -> f64 {
        self.likelihood_potential(theta) + self.prior_potential(theta)
    }

    /// Potential of the smoothed posterior, likelihood plus `g_ρ`.
    pub fn smoothed_potential(&self, theta: &[f64], rho: f64) -> f64 {
        self.likelihood_potential(theta) + lasso_smoothed_potential(self, theta, rho)
    }
}

/// `−log ∫ exp(−τ|z|) N(z; u, ρ²) dz`.
pub fn smoothed_abs(tau: f64, u: f64, rho: f64) -> f64 {
    let s = rho / std::f64::consts::SQRT_2;
    let b = s * (tau - u / (rho * rho));
    let c = s * (tau + u / (rho * rho));
    // e^{b²}erfc(b) = erfcx(b); the Gaussian factor e^{−u²/(2ρ²)} is folded in
    let log_int = 0.5 * (std::f64::consts::PI * rho * rho / 2.0).ln() - u * u / (2.0 * rho * rho)
        + log_add_exp(log_erfcx(b), log_erfcx(c));
    0.5 * (2.0 * std::f64::consts::PI * rho * rho).ln() - log_int
}

/// Smoothed prior potential `g_ρ(θ)`.
pub fn lasso_smoothed_potential(t: &LassoTarget, theta: &[f64], rho: f64) -> f64 {
    if rho == 0.0 {
        return t.prior_potential(theta);
    }
    let bt = &t.b * DVector::from_column_slice(theta);
    bt.iter().map(|&u| smoothed_abs(t.tau, u, rho)).sum()
}

/// Split model with the likelihood kept in the θ-step and `z ≈ Bθ`.
pub fn lasso_split_model(t: &LassoTarget, rho: f64) -> Result<LinearSplitModel> {
    let s2 = t.sigma * t.sigma;
    let p0 = t.x.transpose() * &t.x / s2;
    let b0 = t.x.transpose() * &t.y / s2;
    let block = LinearBlock {
        operator: t.b.clone(),
        rho,
        potential: Arc::new(L1Block {
            tau: t.tau,
            dim: t.b.nrows(),
        }),
    };
    LinearSplitModel::new(p0, b0, vec![block])
}

/// Uniform 1-D grid with density values normalized to unit mass.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub step: f64,
}

impl GridDensity {
    /// Normalizes `exp(−potential)` over a uniform grid on `[lo, hi]`.
    pub fn from_potential<F: Fn(f64) -> f64>(potential: F, lo: f64, hi: f64, n: usize) -> Self {
        let step = (hi - lo) / (n - 1) as f64;
        let grid: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
        let lp: Vec<f64> = grid.iter().map(|&x| -potential(x)).collect();
        let top = lp.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut density: Vec<f64> = lp.iter().map(|v| (v - top).exp()).collect();
        let mass: f64 = density.iter().sum::<f64>() * step;
        density.iter_mut().for_each(|v| *v /= mass);
        Self { grid, density, step }
    }

    /// Highest-density interval `[lo, hi]` holding at least `1 − α` of the mass.
    pub fn hpd_interval(&self, alpha: f64) -> (f64, f64) {
        let mut order: Vec<usize> = (0..self.grid.len()).collect();
        order.sort_by(|&a, &b| self.density[b].total_cmp(&self.density[a]));
        let mut acc = 0.0;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in order {
            acc += self.density[i] * self.step;
            lo = lo.min(self.grid[i]);
            hi = hi.max(self.grid[i]);
            if acc >= 1.0 - alpha {
                break;
            }
        }
        (lo, hi)
    }

    /// Mass of the interval `[lo, hi]`.
    pub fn mass(&self, lo: f64, hi: f64) -> f64 {
        self.grid
            .iter()
            .zip(&self.density)
            .filter(|(x, _)| **x >= lo && **x <= hi)
            .map(|(_, d)| d * self.step)
            .sum()
    }

    /// Posterior mean.
    pub fn mean(&self) -> f64 {
        self.grid.iter().zip(&self.density).map(|(x, d)| x * d * self.step).sum()
    }

    /// `½ ∫ |p − q|` against another density on the same grid.
    pub fn tv_distance(&self, other: &GridDensity) -> f64 {
        0.5 * self
            .density
            .iter()
            .zip(&other.density)
            .map(|(a, b)| (a - b).abs() * self.step)
            .sum::<f64>()
    }
}

/// One row of the credibility comparison for the scalar lasso.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CredibilityRow {
    pub rho: f64,
    /// HPD interval of π.
    pub exact: (f64, f64),
    /// HPD interval of π_ρ.
    pub smoothed: (f64, f64),
    /// π-mass of the π_ρ HPD interval.
    pub coverage: f64,
    /// Theoretical interval for that coverage.
    pub bound: (f64, f64),
}

/// HPD intervals, coverage and theoretical interval for a scalar lasso at
/// each tolerance, on a uniform grid of `[lo, hi]`.
pub fn credibility_table(
    t: &LassoTarget,
    rhos: &[f64],
    alpha: f64,
    lipschitz: f64,
    grid: (f64, f64, usize),
) -> Result<Vec<CredibilityRow>> {
    if t.dim() != 1 {
        return Err(Error::domain("credibility table needs a scalar problem"));
    }
    let (lo, hi, n) = grid;
    let exact = GridDensity::from_potential(|x| t.potential(&[x]), lo, hi, n);
    let c = exact.hpd_interval(alpha);
    rhos.iter()
        .map(|&rho| {
            let smooth = GridDensity::from_potential(|x| t.smoothed_potential(&[x], rho), lo, hi, n);
            let cr = smooth.hpd_interval(alpha);
            Ok(CredibilityRow {
                rho,
                exact: c,
                smoothed: cr,
                coverage: exact.mass(cr.0, cr.1),
                bound: coverage_interval(lipschitz, 1, rho, alpha)?,
            })
        })
        .collect()
}

/// Prior potentials and the sandwich bounds at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPoint {
    pub theta: f64,
    pub g: f64,
    pub g_rho: f64,
    /// `g + L_ρ`.
    pub lower: f64,
    /// `g + U_ρ`.
    pub upper: f64,
}

/// `g`, `g_ρ` and `g + L_ρ`, `g + U_ρ` for a scalar lasso on a grid.
///
/// The Lipschitz constant of `g` is `τ` per row of `B`, `τ√k` overall.
pub fn potential_gap_on_grid(t: &LassoTarget, rho: f64, grid: &[f64]) -> Result<Vec<GapPoint>> {
    if t.dim() != 1 {
        return Err(Error::domain("potential gap grid needs a scalar problem"));
    }
    let (l, u) = potential_gap_bounds(t.tau * (t.b.nrows() as f64).sqrt(), 1, rho)?;
    Ok(grid
        .iter()
        .map(|&x| {
            let g = t.prior_potential(&[x]);
            GapPoint {
                theta: x,
                g,
                g_rho: lasso_smoothed_potential(t, &[x], rho),
                lower: g + l,
                upper: g + u,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadOptions};

    #[test]
    fn smoothed_abs_matches_quadrature() {
        for &(tau, u, rho) in &[(1.0, 0.0, 0.1), (1.0, 2.0, 0.5), (3.0, -1.0, 1.0), (1.0, 5.0, 0.01)] {
            let f = |z: f64| {
                (-tau * z.abs() - (z - u) * (z - u) / (2.0 * rho * rho)).exp() / (2.0 * std::f64::consts::PI * rho * rho).sqrt()
            };
            let opts = QuadOptions {
                abs_tol: 1e-300,
                rel_tol: 1e-12,
                max_intervals: 4000,
            };
            let (a, _) = integrate(f, u - 40.0 * rho, 0.0_f64.max(u - 40.0 * rho).min(u + 40.0 * rho), opts).unwrap();
            let (b, _) = integrate(f, 0.0_f64.max(u - 40.0 * rho).min(u + 40.0 * rho), u + 40.0 * rho, opts).unwrap();
            let want = -(a + b).ln();
            assert!((smoothed_abs(tau, u, rho) - want).abs() < 1e-9, "{tau} {u} {rho}: {} vs {want}", smoothed_abs(tau, u, rho));
        }
    }

    #[test]
    fn small_tolerance_limit() {
        let t = LassoTarget::univariate(1.0, 2.0, 1.0, 1.0).unwrap();
        for &x in &[-2.0, 0.0, 2.0] {
            assert!((lasso_smoothed_potential(&t, &[x], 1e-4) - x.abs()).abs() < 1e-2);
        }
    }

    #[test]
    fn gap_sandwich() {
        let t = LassoTarget::univariate(1.0, 2.0, 1.0, 1.0).unwrap();
        let grid: Vec<f64> = (0..200).map(|i| -3.0 + 6.0 * i as f64 / 199.0).collect();
        for &rho in &[0.01, 0.1, 1.0] {
            for p in potential_gap_on_grid(&t, rho, &grid).unwrap() {
                assert!(p.lower <= p.g_rho && p.g_rho <= p.upper, "rho={rho}: {p:?}");
            }
        }
    }

    #[test]
    fn dimension_mismatch() {
        let r = LassoTarget::new(DVector::zeros(3), DMatrix::zeros(2, 2), DMatrix::identity(2, 2), 1.0, 1.0);
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
