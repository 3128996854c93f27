//! Multi-split Lipschitz bound against the number of observations, and a
//! split Gibbs run on a small logistic regression.

use axda::bounds::tv_bound_lipschitz;
use axda::models::{logistic_split_model, LogisticModel};
use axda::samplers::stream;
use axda::{run_split_gibbs, GibbsConfig, LipschitzBlock};
use rand::Rng;

use crate::config::{Config, Schema};
use crate::error::CliError;
use crate::output::{Csv, Sink};

pub const SCHEMA: Schema = &[
    ("seed", "0"),
    ("n-list", "1,10,100,1000,10000"),
    ("rho-grid", "1e-4,1e-3,1e-2,1e-1"),
    ("d", "10"),
    ("chain-n", "20"),
    ("chain-d", "2"),
    ("tau", "1"),
    ("rho", "0.1"),
    ("sign", "1"),
    ("iters", "20000"),
    ("burnin", "2000"),
];

pub fn run(cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    let seed = cfg.u64("seed")?;
    let d = cfg.usize("d")?;
    if d == 0 {
        return Err(CliError::Config("`d` must be positive".into()));
    }
    let grid = cfg.grid("rho-grid", false)?;
    let mut bound = Csv::new(["n", "rho", "cor3_bound"]);
    for (k, &n) in cfg.usize_list("n-list")?.iter().enumerate() {
        // features uniform on [0, 1]; block j is Lipschitz with constant ‖x_j‖₂
        let mut rng = stream(seed, 1, k as u64);
        let lips: Vec<f64> = (0..n)
            .map(|_| (0..d).map(|_| rng.random::<f64>().powi(2)).sum::<f64>().sqrt())
            .collect();
        for &rho in &grid {
            let blocks: Vec<LipschitzBlock<f64>> = lips.iter().map(|&l| LipschitzBlock { lipschitz: l, rho }).collect();
            bound.row(vec![n.into(), rho.into(), tv_bound_lipschitz(&blocks, d)?.into()]);
        }
    }
    sink.csv("bound", &bound)?;

    let (n, cd) = (cfg.usize("chain-n")?, cfg.usize("chain-d")?);
    if n == 0 || cd == 0 {
        return Err(CliError::Config("`chain-n` and `chain-d` must be positive".into()));
    }
    let mut rng = stream(seed, 2, 0);
    let m = LogisticModel::synthetic(n, cd, cfg.positive("tau")?, cfg.positive("rho")?, &mut rng)?
        .with_sign(cfg.f64("sign")?)?;
    let (iters, burnin) = (cfg.usize("iters")?, cfg.usize("burnin")?);
    if burnin >= iters {
        return Err(CliError::Config("`burnin` must be smaller than `iters`".into()));
    }
    let chain = run_split_gibbs(
        &logistic_split_model(&m)?,
        &GibbsConfig { burnin, parallel_blocks: true, ..GibbsConfig::new(iters, seed) },
    )?;
    let ess = chain.ess()?;
    let mut summary = Csv::new(["component", "posterior_mean", "posterior_variance", "ess"]);
    for (i, ((mean, var), e)) in chain.mean().into_iter().zip(chain.variance()).zip(ess).enumerate() {
        summary.row(vec![i.into(), mean.into(), var.into(), e.into()]);
    }
    sink.csv("chain", &summary)
}
