//! Total-variation image inpainting with the split Gibbs sampler.

use axda::models::{phantom, InpaintingModel};
use axda::samplers::{hpd_threshold, stream};
use axda::{run_split_gibbs, GibbsConfig};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::config::{Config, Schema};
use crate::error::CliError;
use crate::output::{decode_pgm, Cell, Csv, Sink};

pub const SCHEMA: Schema = &[
    ("seed", "0"),
    ("input", ""),
    ("height", "32"),
    ("width", "32"),
    ("mask-fraction", "0.9"),
    ("sigma", "0.07"),
    ("tau", "5"),
    ("rho", "0.1"),
    ("iters", "10000"),
    ("burnin", "1000"),
    ("alpha-n", "99"),
    ("oracle-max-pixels", "256"),
];

fn rel_error(a: &[f64], truth: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(truth).map(|(x, t)| (x - t).powi(2)).sum();
    let den: f64 = truth.iter().map(|t| t * t).sum();
    (num / den).sqrt()
}

pub fn run(cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    let (truth, h, w) = match cfg.str("input") {
        "" => {
            let (h, w) = (cfg.usize("height")?, cfg.usize("width")?);
            if h == 0 || w == 0 {
                return Err(CliError::Config("`height` and `width` must be positive".into()));
            }
            (phantom(h, w), h, w)
        }
        path => {
            let bytes = std::fs::read(path).map_err(|e| CliError::Config(format!("cannot read {path}: {e}")))?;
            decode_pgm(&bytes)?
        }
    };
    let d = h * w;
    let frac = cfg.f64("mask-fraction")?;
    if !(0.0..1.0).contains(&frac) {
        return Err(CliError::Config("`mask-fraction` must lie in [0, 1)".into()));
    }
    let sigma = cfg.positive("sigma")?;
    let seed = cfg.u64("seed")?;
    let mut mask_rng = stream(seed, 0, 0);
    let mask: Vec<usize> = (0..d).filter(|_| mask_rng.random::<f64>() < frac).collect();
    let mut noise_rng = stream(seed, 0, 1);
    let y: Vec<f64> = mask.iter().map(|&i| truth[i] + sigma * noise_rng.sample::<f64, _>(StandardNormal)).collect();
    let model = InpaintingModel::new((h, w), mask, y, sigma, cfg.positive("tau")?, cfg.positive("rho")?, None)?;

    let (iters, burnin) = (cfg.usize("iters")?, cfg.usize("burnin")?);
    if burnin >= iters {
        return Err(CliError::Config("`burnin` must be smaller than `iters`".into()));
    }
    let gibbs = GibbsConfig { burnin, parallel_blocks: true, ..GibbsConfig::new(iters, seed) };
    let chain = run_split_gibbs(&model, &gibbs)?;
    let mmse = chain.mean();

    let (bias, reference): (Vec<f64>, &'static str) = if d <= cfg.usize("oracle-max-pixels")? {
        let oracle = run_split_gibbs(&model.dense_oracle()?, &GibbsConfig { seed: seed.wrapping_add(1), ..gibbs })?;
        (mmse.iter().zip(oracle.mean()).map(|(a, b)| (a - b).abs()).collect(), "dense_oracle")
    } else {
        (mmse.iter().zip(&truth).map(|(a, b)| (a - b).abs()).collect(), "input")
    };

    let observation = model.observation_image();
    sink.pgm("observation", &observation, h, w)?;
    sink.pgm("mmse", &mmse, h, w)?;
    sink.pgm("bias", &bias, h, w)?;

    let mut img = Csv::new((0..w).map(|j| format!("c{j}")));
    for row in mmse.chunks(w) {
        img.row(row.iter().map(|&v| Cell::from(v)).collect());
    }
    sink.csv("mmse", &img)?;

    let mut trace = Csv::new(["iteration", "potential"]);
    for (t, &f) in chain.potential_trace.iter().enumerate() {
        trace.row(vec![(t + 1).into(), f.into()]);
    }
    sink.csv("trace", &trace)?;

    let na = cfg.usize("alpha-n")?;
    if na < 2 {
        return Err(CliError::Config("`alpha-n` must be at least 2".into()));
    }
    let post = &chain.potential_trace[burnin..];
    let mut hpd = Csv::new(["alpha", "gamma_alpha"]);
    for i in 0..na {
        let alpha = 0.01 + 0.98 * i as f64 / (na - 1) as f64;
        hpd.row(vec![alpha.into(), hpd_threshold(post, alpha)?.into()]);
    }
    sink.csv("hpd", &hpd)?;

    let mut summary = Csv::new([
        "pixels",
        "observed",
        "rel_error_observation",
        "rel_error_mmse",
        "min_ess",
        "bias_reference",
    ]);
    summary.row(vec![
        d.into(),
        model.mask().len().into(),
        rel_error(&observation, &truth).into(),
        rel_error(&mmse, &truth).into(),
        chain.min_ess()?.into(),
        reference.into(),
    ]);
    sink.csv("summary", &summary)
}
