//! TV and Wasserstein bounds over a tolerance grid for several dimensions.

use axda::bounds::{
    tv_bound_lipschitz, tv_bound_lipschitz_asymptote, tv_bound_smooth_convex, tv_bound_smooth_convex_asymptote,
    wasserstein_bound,
};
use axda::{KernelFamily, LipschitzBlock, RegularityProfile};

use crate::config::{Config, Schema};
use crate::error::CliError;
use crate::output::{Csv, Sink};

pub const SCHEMA: Schema = &[
    ("seed", "0"),
    ("d-list", "1,10,100,10000,1000000"),
    ("L", "1"),
    ("M", "1"),
    ("Msf", "1"),
    ("rho-grid", "log:-4:0.5:50"),
    ("p", "2"),
];

pub fn run(cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    let ds = cfg.usize_list("d-list")?;
    let l = cfg.f64("L")?;
    let (m, msf) = (cfg.positive("M")?, cfg.positive("Msf")?);
    let p = cfg.usize("p")?;
    if l < 0.0 || p == 0 {
        return Err(CliError::Config("`L` must be non-negative and `p` positive".into()));
    }
    let grid = cfg.grid("rho-grid", true)?;
    let mut csv = Csv::new(["d", "rho", "thm1", "cor1", "thm2", "cor2", "wasserstein"]);
    for &d in &ds {
        let rp = RegularityProfile::new(d).with_lipschitz(l).with_smooth_convex(m, msf);
        rp.validate()?;
        for &rho in &grid {
            let w = wasserstein_bound(KernelFamily::Gaussian, d, p as u32, rho)
                .ok_or_else(|| CliError::Numeric("Gaussian kernel moment unavailable".into()))?;
            csv.row(vec![
                d.into(),
                rho.into(),
                tv_bound_lipschitz(&[LipschitzBlock { lipschitz: l, rho }], d)?.into(),
                tv_bound_lipschitz_asymptote(l, d, rho)?.into(),
                tv_bound_smooth_convex(&rp, rho)?.into(),
                tv_bound_smooth_convex_asymptote(&rp, rho)?.into(),
                w.into(),
            ]);
        }
    }
    sink.csv("curves", &csv)
}
