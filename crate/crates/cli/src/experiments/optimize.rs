//! Quadratic penalty continuation and Monte Carlo EM on a logistic ridge or
//! scalar lasso problem.

use axda::models::{lasso_split_model, logistic_split_model, LassoTarget, LinearSplitModel, LogisticModel};
use axda::optimize::{mcem_run, quadratic_penalty_continuation, EStep, McemOptions, PenaltyOptions};
use axda::samplers::stream;

use crate::config::{Config, Schema};
use crate::error::CliError;
use crate::output::{Cell, Csv, Sink};

pub const SCHEMA: Schema = &[
    ("seed", "0"),
    ("problem", "logistic"),
    ("n", "20"),
    ("d", "2"),
    ("tau", "1"),
    ("y", "1"),
    ("x", "2"),
    ("sigma", "1"),
    ("rho-schedule", "1,0.3,0.1,0.03,0.01"),
    ("max-outer", "500"),
    ("tol", "1e-10"),
    ("mcem-rho", "0.1"),
    ("mcem-iters", "100"),
    ("mcem-draws", "100"),
];

fn build(cfg: &Config, seed: u64) -> Result<LinearSplitModel, CliError> {
    let tau = cfg.positive("tau")?;
    match cfg.str("problem") {
        "logistic" => {
            let (n, d) = (cfg.usize("n")?, cfg.usize("d")?);
            if n == 0 || d == 0 {
                return Err(CliError::Config("`n` and `d` must be positive".into()));
            }
            let mut rng = stream(seed, 0, 0);
            Ok(logistic_split_model(&LogisticModel::synthetic(n, d, tau, 1.0, &mut rng)?)?)
        }
        "lasso" => {
            let t = LassoTarget::univariate(cfg.f64("y")?, cfg.f64("x")?, tau, cfg.positive("sigma")?)?;
            Ok(lasso_split_model(&t, 1.0)?)
        }
        other => Err(CliError::Config(format!("`problem` must be logistic or lasso, got `{other}`"))),
    }
}

fn theta_row(method: &'static str, rho: f64, it: usize, theta: &[f64]) -> Vec<Cell> {
    let mut r = vec![method.into(), rho.into(), it.into()];
    r.extend(theta.iter().map(|&v| Cell::from(v)));
    r
}

pub fn run(cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    let seed = cfg.u64("seed")?;
    let model = build(cfg, seed)?;
    let opts = PenaltyOptions { max_outer: cfg.usize("max-outer")?, tol: cfg.positive("tol")?, ..Default::default() };
    let path = quadratic_penalty_continuation(&model, &cfg.grid("rho-schedule", false)?, &opts)?;

    let mut trace = Csv::new(["stage", "rho", "iteration", "objective"]);
    let d = path.first().map_or(0, |p| p.theta.len());
    let mut header = vec!["method".to_string(), "rho".into(), "iteration".into()];
    header.extend((0..d).map(|k| format!("theta_{k}")));
    let mut thetas = Csv::new(header);
    let rhos = cfg.grid("rho-schedule", false)?;
    for (s, (res, &rho)) in path.iter().zip(&rhos).enumerate() {
        for (i, &f) in res.objective_trace.iter().enumerate() {
            trace.row(vec![s.into(), rho.into(), i.into(), f.into()]);
        }
        thetas.row(theta_row("penalty", rho, res.iterations, &res.theta));
    }
    sink.csv("penalty_trace", &trace)?;

    let rho = cfg.positive("mcem-rho")?;
    let draws = cfg.usize("mcem-draws")?;
    if draws == 0 {
        return Err(CliError::Config("`mcem-draws` must be positive".into()));
    }
    let em = mcem_run(
        &model.with_rho(rho)?,
        &vec![0.0; d],
        &McemOptions {
            max_iters: cfg.usize("mcem-iters")?,
            estep: EStep::MonteCarlo { draws },
            seed,
            parallel_blocks: true,
        },
    )?;
    for (i, th) in em.iter().enumerate() {
        thetas.row(theta_row("mcem", rho, i, th));
    }
    sink.csv("theta", &thetas)
}
