//! Scalar lasso: smoothed prior potentials and credibility regions.

use axda::models::{credibility_table, potential_gap_on_grid, LassoTarget};

use crate::config::{Config, Schema};
use crate::error::CliError;
use crate::output::{Csv, Sink};

pub const SCHEMA: Schema = &[
    ("seed", "0"),
    ("y", "1"),
    ("x", "2"),
    ("tau", "1"),
    ("sigma", "1"),
    ("alpha", "0.05"),
    ("L", "1"),
    ("plot-rhos", "0.01,0.1,1"),
    ("table-rhos", "1e-3,1e-2,1e-1,1"),
    ("plot-lo", "-3"),
    ("plot-hi", "3"),
    ("plot-n", "601"),
    ("quad-lo", "-6"),
    ("quad-hi", "8"),
    ("quad-n", "140001"),
];

fn range(cfg: &Config, lo: &str, hi: &str, n: &str) -> Result<(f64, f64, usize), CliError> {
    let (a, b, k) = (cfg.f64(lo)?, cfg.f64(hi)?, cfg.usize(n)?);
    if a >= b || a.is_nan() || k < 2 {
        return Err(CliError::Config(format!("`{lo}` < `{hi}` and `{n}` ≥ 2 are required")));
    }
    Ok((a, b, k))
}

/// `log ∫ exp(−f)` by the trapezoid rule on a uniform grid.
fn log_mass<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> f64 {
    let step = (hi - lo) / (n - 1) as f64;
    let v: Vec<f64> = (0..n).map(|i| -f(lo + step * i as f64)).collect();
    let top = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = v.iter().enumerate().map(|(i, x)| if i == 0 || i == n - 1 { 0.5 } else { 1.0 } * (x - top).exp()).sum();
    top + (s * step).ln()
}

pub fn run(cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    let t = LassoTarget::univariate(cfg.f64("y")?, cfg.f64("x")?, cfg.f64("tau")?, cfg.positive("sigma")?)?;
    let alpha = cfg.f64("alpha")?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CliError::Config("`alpha` must lie in (0, 1)".into()));
    }
    let (plo, phi, pn) = range(cfg, "plot-lo", "plot-hi", "plot-n")?;
    let (qlo, qhi, qn) = range(cfg, "quad-lo", "quad-hi", "quad-n")?;
    let grid: Vec<f64> = (0..pn).map(|i| plo + (phi - plo) * i as f64 / (pn - 1) as f64).collect();

    let mut pot = Csv::new(["rho", "theta", "g", "g_rho", "g_lower", "g_upper", "prior_rho", "posterior_rho"]);
    for &rho in &cfg.grid("plot-rhos", false)? {
        let log_z = log_mass(|v| t.smoothed_potential(&[v], rho), qlo, qhi, qn);
        for p in potential_gap_on_grid(&t, rho, &grid)? {
            pot.row(vec![
                rho.into(),
                p.theta.into(),
                p.g.into(),
                p.g_rho.into(),
                p.lower.into(),
                p.upper.into(),
                // ∫exp(−g_ρ) = ∫exp(−τ|z|)dz = 2/τ
                (0.5 * t.tau * (-p.g_rho).exp()).into(),
                (-t.smoothed_potential(&[p.theta], rho) - log_z).exp().into(),
            ]);
        }
    }
    sink.csv("potentials", &pot)?;

    let rows = credibility_table(&t, &cfg.grid("table-rhos", false)?, alpha, cfg.f64("L")?, (qlo, qhi, qn))?;
    let mut tab = Csv::new(["rho", "hpd_lo", "hpd_hi", "coverage", "bound_lo", "bound_hi", "exact_hpd_lo", "exact_hpd_hi"]);
    for r in rows {
        tab.row(vec![
            r.rho.into(),
            r.smoothed.0.into(),
            r.smoothed.1.into(),
            r.coverage.into(),
            r.bound.0.into(),
            r.bound.1.into(),
            r.exact.0.into(),
            r.exact.1.into(),
        ]);
    }
    sink.csv("credibility", &tab)
}
