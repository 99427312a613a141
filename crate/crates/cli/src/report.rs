use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::{Cli, Format, Global};

/// Bumped whenever a field is renamed or removed.
pub const SCHEMA_VERSION: u32 = 1;

/// Everything that maps to exit status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Core(#[from] barrierlab::Error),
}

/// What a command hands back before formatting.
pub struct Outcome {
    /// Resolved command parameters, defaults filled in.
    pub parameters: Value,
    pub results: Value,
    pub pass: bool,
    /// Human-readable body for `--format text`.
    pub text: String,
    pub csv: Option<String>,
}

#[derive(Serialize)]
struct Config<'a> {
    command: &'a crate::args::Command,
    #[serde(flatten)]
    global: &'a Global,
    parameters: &'a Value,
}

pub struct Report {
    pub pass: bool,
    json: Value,
    text: String,
    csv: Option<String>,
}

impl Report {
    pub fn new(cli: &Cli, o: Outcome) -> Self {
        let config = Config { command: &cli.command, global: &cli.global, parameters: &o.parameters };
        let json = json!({
            "schema_version": SCHEMA_VERSION,
            "command": cli.command.name(),
            "config": config,
            "results": o.results,
            "pass": o.pass,
        });
        let mut text = format!("barrierlab {} (seed {:#x})\n", cli.command.name(), cli.global.seed);
        text.push_str(&o.text);
        let _ = writeln!(text, "result: {}", if o.pass { "PASS" } else { "FAIL" });
        Self { pass: o.pass, json, text, csv: o.csv }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("report values are finite JSON");
        s.push('\n');
        s
    }

    pub fn emit(&self, g: &Global) -> Result<(), CliError> {
        if let (Some(path), Some(csv)) = (&g.csv, &self.csv) {
            write_file(path, csv)?;
        }
        let body = match g.format {
            Format::Json => self.to_json(),
            Format::Text => self.text.clone(),
        };
        match &g.output {
            Some(path) => write_file(path, &body),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

/// Reads and parses a JSON input; parse errors keep serde's line and column.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.to_path_buf(), source })
}

/// JSON for a float that may be NaN or infinite.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

/// A judged quantity together with its bound and tolerance.
pub fn judged(value: f64, bound: f64, tol: f64, holds: bool) -> Value {
    json!({ "value": float(value), "bound": float(bound), "tolerance": tol, "holds": holds })
}
