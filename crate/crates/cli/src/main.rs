//! `axda <experiment> --config <path> [--set key=value ...] --out <dir>`

mod config;
mod error;
mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::Config;
use error::CliError;
use output::Sink;

/// Reproduce the data augmentation experiments as CSV and PGM files.
#[derive(Debug, Parser)]
#[command(name = "axda", version)]
struct Args {
    /// One of bounds, gaussian, lasso, inpaint, logistic, optimize.
    experiment: String,
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Override one configuration entry; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
}

fn run(args: &Args) -> Result<Vec<PathBuf>, CliError> {
    let name = experiments::NAMES
        .into_iter()
        .find(|n| *n == args.experiment)
        .ok_or_else(|| {
            CliError::Config(format!(
                "unknown experiment `{}`; expected one of {}",
                args.experiment,
                experiments::NAMES.join(", ")
            ))
        })?;
    let schema = experiments::schema(name).expect("every listed experiment has a schema");
    let cfg = Config::load(schema, Some(&args.config), &args.set)?;
    let mut sink = Sink::new(&args.out, name)?;
    experiments::run(name, &cfg, &mut sink)?;
    Ok(sink.written)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("axda: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
