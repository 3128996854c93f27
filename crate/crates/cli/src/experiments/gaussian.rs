//! Exact W₂ and Monte Carlo TV between a Gaussian and its smoothed version.

use axda::bounds::{tv_bound_smooth_convex, wasserstein_bound};
use axda::models::{gaussian_marginal_exact, gaussian_w2_exact, squared_exponential_covariance, GaussianTarget};
use axda::samplers::{estimate_tv_mc, stream};
use axda::{KernelFamily, RegularityProfile};
use nalgebra::DVector;

use crate::config::{Config, Schema};
use crate::error::CliError;
use crate::output::{Csv, Sink};

pub const SCHEMA: Schema = &[
    ("seed", "0"),
    ("d", "10"),
    ("a", "1.5"),
    ("scale", "1"),
    ("nugget", "1e-6"),
    ("rho-grid", "0,1e-3,3e-3,1e-2,3e-2,1e-1,3e-1,1,3"),
    ("mc-draws", "100000"),
];

pub fn run(cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    let d = cfg.usize("d")?;
    if d == 0 {
        return Err(CliError::Config("`d` must be positive".into()));
    }
    let sigma = squared_exponential_covariance(d, cfg.positive("a")?, cfg.positive("scale")?, cfg.f64("nugget")?);
    let t = GaussianTarget::new(DVector::zeros(d), sigma)?;
    let (m, msf) = t.smoothness_constants();
    let rp = RegularityProfile::new(d).with_smooth_convex(m, msf);
    let draws = cfg.usize("mc-draws")?;
    if draws < 2 {
        return Err(CliError::Config("`mc-draws` must be at least 2".into()));
    }
    let seed = cfg.u64("seed")?;
    let mut csv = Csv::new(["rho", "w2_exact", "w2_bound", "tv_mc", "tv_bound"]);
    for (i, &rho) in cfg.grid("rho-grid", true)?.iter().enumerate() {
        let smoothed = gaussian_marginal_exact(&t, rho)?;
        let mut rng = stream(seed, 0, i as u64);
        let tv = estimate_tv_mc(|x| t.log_density(x), |x| smoothed.log_density(x), |r| t.sample(r), draws, &mut rng);
        let w2_bound = wasserstein_bound(KernelFamily::Gaussian, d, 2, rho).unwrap_or(f64::INFINITY);
        csv.row(vec![
            rho.into(),
            gaussian_w2_exact(&t, rho).into(),
            w2_bound.into(),
            tv.value.into(),
            tv_bound_smooth_convex(&rp, rho)?.into(),
        ]);
    }
    sink.csv("figure", &csv)
}
