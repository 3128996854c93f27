//! Generic split Gibbs sampler.

use rayon::prelude::*;

use super::diagnostics::ess;
use super::rng::{stream, StreamRng, THETA_STREAM};
use crate::error::{Error, Result};

/// Auxiliary variable of one block and its model-specific latent extras.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BlockState {
    pub z: Vec<f64>,
    pub latent: Vec<f64>,
}

/// Full state of the augmented chain.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GibbsState {
    pub theta: Vec<f64>,
    pub blocks: Vec<BlockState>,
}

/// A model augmented with splitting variables `z_{1:J}`.
///
/// Blocks are conditionally independent given θ, so
/// [`sample_block`](SplitModel::sample_block) may run concurrently.
pub trait SplitModel: Sync {
    fn theta_dim(&self) -> usize;
    fn num_blocks(&self) -> usize;
    fn initial_state(&self) -> GibbsState;
    /// θ ~ π_ρ(θ | z_{1:J}); `state.theta` holds the previous θ.
    fn sample_theta(&self, state: &GibbsState, rng: &mut StreamRng) -> Result<Vec<f64>>;
    /// z_j ~ π_ρ(z_j | θ), updated in place.
    fn sample_block(&self, j: usize, theta: &[f64], block: &mut BlockState, rng: &mut StreamRng) -> Result<()>;
    /// Target potential `f(θ) = −log π(θ)` up to a constant.
    fn potential(&self, theta: &[f64]) -> f64;
}

/// Chain length, storage and seeding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GibbsConfig {
    pub iters: usize,
    pub burnin: usize,
    pub thinning: usize,
    pub seed: u64,
    pub parallel_blocks: bool,
    /// Also store the auxiliary blocks of every kept iteration.
    pub store_blocks: bool,
}

impl GibbsConfig {
    /// Half the iterations as burn-in, no thinning.
    pub fn new(iters: usize, seed: u64) -> Self {
        Self {
            iters,
            burnin: iters / 2,
            thinning: 1,
            seed,
            parallel_blocks: false,
            store_blocks: false,
        }
    }
}

/// Stored draws and traces of one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput {
    pub samples: Vec<Vec<f64>>,
    pub block_samples: Vec<Vec<BlockState>>,
    /// `f(θ^{[t]})` for every iteration, burn-in included.
    pub potential_trace: Vec<f64>,
    pub seed: u64,
    pub iters: usize,
    pub burnin: usize,
    pub thinning: usize,
    pub final_state: GibbsState,
}

impl ChainOutput {
    /// Stored values of θ component `i`.
    pub fn component(&self, i: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s[i]).collect()
    }

    /// Posterior mean of θ (the MMSE estimate).
    pub fn mean(&self) -> Vec<f64> {
        let d = self.final_state.theta.len();
        let mut m = vec![0.0; d];
        for s in &self.samples {
            for (mi, si) in m.iter_mut().zip(s) {
                *mi += si;
            }
        }
        let n = self.samples.len().max(1) as f64;
        m.iter_mut().for_each(|v| *v /= n);
        m
    }

    /// Per-component sample variance of θ.
    pub fn variance(&self) -> Vec<f64> {
        let m = self.mean();
        let n = self.samples.len();
        let mut v = vec![0.0; m.len()];
        for s in &self.samples {
            for i in 0..m.len() {
                v[i] += (s[i] - m[i]).powi(2);
            }
        }
        v.iter_mut().for_each(|x| *x /= (n.max(2) - 1) as f64);
        v
    }

    /// Effective sample size of every θ component.
    pub fn ess(&self) -> Result<Vec<f64>> {
        (0..self.final_state.theta.len()).map(|i| ess(&self.component(i))).collect()
    }

    /// Smallest per-component effective sample size.
    pub fn min_ess(&self) -> Result<f64> {
        Ok(self.ess()?.into_iter().fold(f64::INFINITY, f64::min))
    }
}

/// One sweep: θ-update followed by all block updates.
pub fn gibbs_step<M: SplitModel + ?Sized>(
    model: &M,
    state: &mut GibbsState,
    seed: u64,
    iteration: usize,
    parallel_blocks: bool,
) -> Result<()> {
    let t = iteration as u64;
    let theta = model
        .sample_theta(state, &mut stream(seed, THETA_STREAM, t))
        .map_err(|e| Error::Block {
            block: usize::MAX,
            iteration,
            source: Box::new(e),
        })?;
    state.theta = theta;
    let theta = &state.theta;
    let update = |(j, b): (usize, &mut BlockState)| {
        model
            .sample_block(j, theta, b, &mut stream(seed, j as u64, t))
            .map_err(|e| Error::Block {
                block: j,
                iteration,
                source: Box::new(e),
            })
    };
    let results: Vec<Result<()>> = if parallel_blocks {
        state.blocks.par_iter_mut().enumerate().map(update).collect()
    } else {
        state.blocks.iter_mut().enumerate().map(update).collect()
    };
    results.into_iter().collect()
}

/// Runs the split Gibbs sampler from the model's initial state.
pub fn run_split_gibbs<M: SplitModel + ?Sized>(model: &M, cfg: &GibbsConfig) -> Result<ChainOutput> {
    run_split_gibbs_from(model, model.initial_state(), cfg)
}

/// Runs the split Gibbs sampler from a given state.
pub fn run_split_gibbs_from<M: SplitModel + ?Sized>(
    model: &M,
    mut state: GibbsState,
    cfg: &GibbsConfig,
) -> Result<ChainOutput> {
    if cfg.thinning == 0 {
        return Err(Error::domain("thinning must be at least 1"));
    }
    if cfg.burnin > cfg.iters {
        return Err(Error::domain("burn-in exceeds the number of iterations"));
    }
    if state.theta.len() != model.theta_dim() || state.blocks.len() != model.num_blocks() {
        return Err(Error::domain("initial state does not match the model dimensions"));
    }
    let kept = (cfg.iters - cfg.burnin) / cfg.thinning;
    let mut samples = Vec::with_capacity(kept);
    let mut block_samples = Vec::new();
    let mut potential_trace = Vec::with_capacity(cfg.iters);
    for t in 0..cfg.iters {
        gibbs_step(model, &mut state, cfg.seed, t, cfg.parallel_blocks)?;
        potential_trace.push(model.potential(&state.theta));
        if t >= cfg.burnin && (t - cfg.burnin + 1).is_multiple_of(cfg.thinning) {
            samples.push(state.theta.clone());
            if cfg.store_blocks {
                block_samples.push(state.blocks.clone());
            }
        }
    }
    Ok(ChainOutput {
        samples,
        block_samples,
        potential_trace,
        seed: cfg.seed,
        iters: cfg.iters,
        burnin: cfg.burnin,
        thinning: cfg.thinning,
        final_state: state,
    })
}
