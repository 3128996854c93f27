//! One module per experiment. Each declares its configuration schema and
//! writes `<experiment>_<name>` files into the output directory.

mod bounds;
mod gaussian;
mod inpaint;
mod lasso;
mod logistic;
mod optimize;

use crate::config::{Config, Schema};
use crate::error::CliError;
use crate::output::Sink;

pub const NAMES: [&str; 6] = ["bounds", "gaussian", "lasso", "inpaint", "logistic", "optimize"];

pub fn schema(name: &str) -> Option<Schema> {
    Some(match name {
        "bounds" => bounds::SCHEMA,
        "gaussian" => gaussian::SCHEMA,
        "lasso" => lasso::SCHEMA,
        "inpaint" => inpaint::SCHEMA,
        "logistic" => logistic::SCHEMA,
        "optimize" => optimize::SCHEMA,
        _ => return None,
    })
}

pub fn run(name: &'static str, cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    match name {
        "bounds" => bounds::run(cfg, sink),
        "gaussian" => gaussian::run(cfg, sink),
        "lasso" => lasso::run(cfg, sink),
        "inpaint" => inpaint::run(cfg, sink),
        "logistic" => logistic::run(cfg, sink),
        "optimize" => optimize::run(cfg, sink),
        _ => Err(CliError::Config(format!("unknown experiment `{name}`"))),
    }
}
