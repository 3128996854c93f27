//! Deterministic inference on split models with Gaussian coupling: quadratic
//! penalty alternating minimization and Monte Carlo EM.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::LinearSplitModel;
use crate::samplers::{stream, SplitModel};

/// Stopping rule of [`quadratic_penalty_minimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyOptions {
    pub max_outer: usize,
    /// Stop once the objective decreases by less than `tol` and no θ
    /// coordinate moves by more than `theta_tol·(1 + ‖θ‖∞)`.
    pub tol: f64,
    pub theta_tol: f64,
    pub parallel_blocks: bool,
}

impl Default for PenaltyOptions {
    fn default() -> Self {
        Self {
            max_outer: 500,
            tol: 1e-10,
            theta_tol: 1e-10,
            parallel_blocks: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyResult {
    pub theta: Vec<f64>,
    pub z: Vec<Vec<f64>>,
    /// Objective after the initial z-step and after every accepted sweep.
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn minimize_blocks(model: &LinearSplitModel, theta: &[f64], parallel: bool) -> Result<Vec<Vec<f64>>> {
    let step = |j: usize| {
        let b = &model.blocks()[j];
        b.potential.minimize_conditional(&model.apply(j, theta), b.rho)
    };
    let n = model.blocks().len();
    if parallel {
        (0..n).into_par_iter().map(step).collect()
    } else {
        (0..n).map(step).collect()
    }
}

fn as_slices(z: &[Vec<f64>]) -> Vec<&[f64]> {
    z.iter().map(Vec::as_slice).collect()
}

/// Alternating minimization of
/// `½θᵀP₀θ − b₀ᵀθ + Σ_j f_j(z_j) + ‖A_jθ − z_j‖²/(2ρ_j²)`.
///
/// Each half-step is an exact minimization, so the objective cannot increase;
/// a sweep that increases it through rounding is discarded and ends the run.
/// This limits the attainable accuracy of θ to about `√ε` relative.
pub fn quadratic_penalty_minimize(
    model: &LinearSplitModel,
    theta0: Option<&[f64]>,
    opts: &PenaltyOptions,
) -> Result<PenaltyResult> {
    let mut theta = match theta0 {
        Some(t) if t.len() == model.theta_dim() => t.to_vec(),
        Some(_) => return Err(Error::domain("initial theta has the wrong length")),
        None => model.initial_state().theta,
    };
    let mut z = minimize_blocks(model, &theta, opts.parallel_blocks)?;
    let mut obj = model.penalized_objective(&theta, &as_slices(&z));
    let mut trace = vec![obj];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_outer {
        iterations += 1;
        let th = model.theta_minimizer(&as_slices(&z));
        let nz = minimize_blocks(model, &th, opts.parallel_blocks)?;
        let next = model.penalized_objective(&th, &as_slices(&nz));
        if !next.is_finite() {
            return Err(Error::Numeric("objective is not finite".into()));
        }
        if next > obj {
            converged = true;
            break;
        }
        let decrease = obj - next;
        let scale = 1.0 + theta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let step = th.iter().zip(&theta).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        theta = th;
        z = nz;
        obj = next;
        trace.push(obj);
        if decrease < opts.tol && step <= opts.theta_tol * scale {
            converged = true;
            break;
        }
    }
    Ok(PenaltyResult {
        theta,
        z,
        objective_trace: trace,
        iterations,
        converged,
    })
}

/// Runs [`quadratic_penalty_minimize`] over a decreasing tolerance schedule,
/// warm-starting each stage from the previous solution.
pub fn quadratic_penalty_continuation(
    model: &LinearSplitModel,
    rhos: &[f64],
    opts: &PenaltyOptions,
) -> Result<Vec<PenaltyResult>> {
    let mut out: Vec<PenaltyResult> = Vec::with_capacity(rhos.len());
    for &rho in rhos {
        let m = model.with_rho(rho)?;
        let start = out.last().map(|r| r.theta.clone());
        out.push(quadratic_penalty_minimize(&m, start.as_deref(), opts)?);
    }
    Ok(out)
}

/// How the E-step computes `E[z_j | θ]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EStep {
    /// Average of `draws` exact conditional draws.
    MonteCarlo { draws: usize },
    /// Closed form or quadrature.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McemOptions {
    pub max_iters: usize,
    pub estep: EStep,
    pub seed: u64,
    pub parallel_blocks: bool,
}

fn expected_blocks(model: &LinearSplitModel, theta: &[f64], opts: &McemOptions, t: usize) -> Result<Vec<Vec<f64>>> {
    let step = |j: usize| -> Result<Vec<f64>> {
        let b = &model.blocks()[j];
        let m = model.apply(j, theta);
        match opts.estep {
            EStep::Exact => b.potential.conditional_mean(&m, b.rho),
            EStep::MonteCarlo { draws } => {
                if draws == 0 {
                    return Err(Error::domain("monte carlo e-step needs at least one draw"));
                }
                let mut rng = stream(opts.seed, j as u64, t as u64);
                let mut acc = vec![0.0; m.len()];
                for _ in 0..draws {
                    let z = b.potential.sample_conditional(&m, b.rho, &mut rng)?;
                    acc.iter_mut().zip(&z).for_each(|(a, v)| *a += v);
                }
                acc.iter_mut().for_each(|a| *a /= draws as f64);
                Ok(acc)
            }
        }
    };
    let n = model.blocks().len();
    let results: Vec<Result<Vec<f64>>> = if opts.parallel_blocks {
        (0..n).into_par_iter().map(step).collect()
    } else {
        (0..n).map(step).collect()
    };
    results
        .into_iter()
        .enumerate()
        .map(|(j, r)| {
            r.map_err(|e| Error::Block {
                block: j,
                iteration: t,
                source: Box::new(e),
            })
        })
        .collect()
}

/// EM on the marginal `π_ρ(θ)` with the blocks as missing data.
///
/// Returns the iterates, `theta0` first.
pub fn mcem_run(model: &LinearSplitModel, theta0: &[f64], opts: &McemOptions) -> Result<Vec<Vec<f64>>> {
    if theta0.len() != model.theta_dim() {
        return Err(Error::domain("initial theta has the wrong length"));
    }
    let mut trace = vec![theta0.to_vec()];
    for t in 0..opts.max_iters {
        let means = expected_blocks(model, trace.last().expect("non-empty trace"), opts, t)?;
        trace.push(model.theta_minimizer(&as_slices(&means)));
    }
    Ok(trace)
}
