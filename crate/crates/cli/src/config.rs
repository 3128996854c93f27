//! Flat `key = value` configuration with per-experiment key sets.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::CliError;

/// Parsed configuration. Every key must appear in the experiment's schema.
#[derive(Debug, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

/// Allowed keys and their defaults for one experiment.
pub type Schema = &'static [(&'static str, &'static str)];

fn parse_line(line: &str, origin: &str) -> Result<Option<(String, String)>, CliError> {
    let line = line.split('#').next().unwrap_or("").trim();
    if line.is_empty() {
        return Ok(None);
    }
    let (k, v) = line
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("{origin}: expected key=value, got `{line}`")))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(CliError::Config(format!("{origin}: empty key")));
    }
    Ok(Some((k.to_string(), v.trim().to_string())))
}

impl Config {
    /// Defaults from `schema`, then the file, then `overrides` in order.
    pub fn load(schema: Schema, file: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        let mut values: BTreeMap<String, String> =
            schema.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let mut set = |k: String, v: String, origin: &str| {
            if !values.contains_key(&k) {
                return Err(CliError::Config(format!("{origin}: unknown key `{k}`")));
            }
            values.insert(k, v);
            Ok(())
        };
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            for (i, line) in text.lines().enumerate() {
                let origin = format!("{}:{}", path.display(), i + 1);
                if let Some((k, v)) = parse_line(line, &origin)? {
                    set(k, v, &origin)?;
                }
            }
        }
        for o in overrides {
            match parse_line(o, "--set")? {
                Some((k, v)) => set(k, v, "--set")?,
                None => return Err(CliError::Config(format!("--set: expected key=value, got `{o}`"))),
            }
        }
        Ok(Self { values })
    }

    pub fn str(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or_else(|| panic!("key `{key}` missing from schema"))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<T, CliError> {
        self.str(key)
            .parse()
            .map_err(|_| CliError::Config(format!("`{key}` must be {what}, got `{}`", self.str(key))))
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        let v: f64 = self.parse(key, "a number")?;
        if !v.is_finite() {
            return Err(CliError::Config(format!("`{key}` must be finite")));
        }
        Ok(v)
    }

    pub fn positive(&self, key: &str) -> Result<f64, CliError> {
        let v = self.f64(key)?;
        if v <= 0.0 {
            return Err(CliError::Config(format!("`{key}` must be positive, got {v}")));
        }
        Ok(v)
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        self.parse(key, "a non-negative integer")
    }

    pub fn u64(&self, key: &str) -> Result<u64, CliError> {
        self.parse(key, "a non-negative integer")
    }

    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>, CliError> {
        let bad = || CliError::Config(format!("`{key}` must be a comma-separated list of integers"));
        let v = self
            .str(key)
            .split(',')
            .map(|s| s.trim().parse::<f64>().ok().filter(|x| x.fract() == 0.0 && *x >= 1.0).map(|x| x as usize))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(bad)?;
        if v.is_empty() {
            return Err(bad());
        }
        Ok(v)
    }

    /// `log:a:b:n` for `n` points `10^a … 10^b`, or a comma-separated list.
    /// Values must be non-negative; `allow_zero = false` requires them positive.
    pub fn grid(&self, key: &str, allow_zero: bool) -> Result<Vec<f64>, CliError> {
        let raw = self.str(key);
        let bad = |msg: &str| CliError::Config(format!("`{key}`: {msg} (got `{raw}`)"));
        let v: Vec<f64> = if let Some(spec) = raw.strip_prefix("log:") {
            let parts: Vec<&str> = spec.split(':').collect();
            if parts.len() != 3 {
                return Err(bad("expected log:a:b:n"));
            }
            let a: f64 = parts[0].trim().parse().map_err(|_| bad("bad start exponent"))?;
            let b: f64 = parts[1].trim().parse().map_err(|_| bad("bad end exponent"))?;
            let n: usize = parts[2].trim().parse().map_err(|_| bad("bad point count"))?;
            match n {
                0 => return Err(bad("at least one point is required")),
                1 => vec![10f64.powf(a)],
                _ => (0..n).map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)).collect(),
            }
        } else {
            raw.split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad("expected a list of numbers"))?
        };
        if v.is_empty() {
            return Err(bad("empty grid"));
        }
        if v.iter().any(|x| !x.is_finite() || *x < 0.0 || (!allow_zero && *x == 0.0)) {
            return Err(bad(if allow_zero { "values must be non-negative" } else { "values must be positive" }));
        }
        Ok(v)
    }
}
