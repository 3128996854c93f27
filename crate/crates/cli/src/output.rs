//! CSV and PGM writers, PGM reader.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// One CSV cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(&'static str),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&'static str> for Cell {
    fn from(v: &'static str) -> Self {
        Cell::Text(v)
    }
}

/// Table with a fixed header; floats are written with 17 significant digits.
#[derive(Debug, Clone)]
pub struct Csv {
    header: Vec<String>,
    body: String,
}

impl Csv {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            body: String::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        assert_eq!(cells.len(), self.header.len(), "row width differs from header");
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                self.body.push(',');
            }
            match c {
                Cell::Int(v) => write!(self.body, "{v}").unwrap(),
                Cell::Float(v) => write!(self.body, "{v:.16e}").unwrap(),
                Cell::Text(v) => self.body.push_str(v),
            }
        }
        self.body.push('\n');
    }

    pub fn render(&self) -> String {
        format!("{}\n{}", self.header.join(","), self.body)
    }
}

/// Destination directory and experiment prefix for output files.
#[derive(Debug, Clone)]
pub struct Sink {
    dir: PathBuf,
    prefix: &'static str,
    pub written: Vec<PathBuf>,
}

impl Sink {
    pub fn new(dir: &Path, prefix: &'static str) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), prefix, written: Vec::new() })
    }

    fn path(&self, name: &str, ext: &str) -> PathBuf {
        self.dir.join(format!("{}_{name}.{ext}", self.prefix))
    }

    pub fn csv(&mut self, name: &str, table: &Csv) -> Result<(), CliError> {
        let p = self.path(name, "csv");
        std::fs::write(&p, table.render())?;
        self.written.push(p);
        Ok(())
    }

    /// Gray image with values in `[0, 1]` (clamped) as 8-bit binary PGM.
    pub fn pgm(&mut self, name: &str, img: &[f64], h: usize, w: usize) -> Result<(), CliError> {
        let p = self.path(name, "pgm");
        std::fs::write(&p, encode_pgm(img, h, w))?;
        self.written.push(p);
        Ok(())
    }
}

pub fn encode_pgm(img: &[f64], h: usize, w: usize) -> Vec<u8> {
    assert_eq!(img.len(), h * w);
    let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
    out.extend(img.iter().map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8));
    out
}

/// Reads an 8-bit binary PGM into values in `[0, 1]`, row-major.
pub fn decode_pgm(bytes: &[u8]) -> Result<(Vec<f64>, usize, usize), CliError> {
    let bad = |m: &str| CliError::Config(format!("not a binary PGM image: {m}"));
    if !bytes.starts_with(b"P5") {
        return Err(bad("missing P5 magic"));
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for f in fields.iter_mut() {
        loop {
            match bytes.get(pos) {
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&c| c != b'\n') {
                        pos += 1;
                    }
                }
                Some(c) if c.is_ascii_whitespace() => pos += 1,
                Some(_) => break,
                None => return Err(bad("truncated header")),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *f = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("bad header field"))?;
    }
    let [w, h, maxval] = fields;
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(bad("header not terminated"));
    }
    pos += 1;
    if w == 0 || h == 0 || maxval == 0 || maxval > 255 {
        return Err(bad("only non-empty 8-bit images are supported"));
    }
    let data = &bytes[pos..];
    if data.len() < w * h {
        return Err(bad("pixel data truncated"));
    }
    Ok((data[..w * h].iter().map(|&b| b as f64 / maxval as f64).collect(), h, w))
}
