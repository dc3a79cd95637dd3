//! Artifact files: `results.csv`, `results.json`, `manifest.json` and
//! optional coefficient dumps under `coefficients/`.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// A plain table; every cell is already formatted.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> Result<Vec<u8>, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }
}

/// Shortest round-trip decimal, so reruns are byte-identical.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub struct Outcome {
    /// The statement the run exercises, embedded in every results file.
    pub statement: &'static str,
    pub table: Table,
    pub result: serde_json::Value,
    pub dumps: Vec<(String, Table)>,
}

impl Outcome {
    pub fn new(statement: &'static str, table: Table, result: impl Serialize) -> Result<Self, CliError> {
        let result = serde_json::to_value(result).map_err(|e| CliError::Numerical(e.to_string()))?;
        Ok(Outcome {
            statement,
            table,
            result,
            dumps: Vec::new(),
        })
    }
}

pub fn config_hash(command: &str, config: &ExperimentConfig) -> String {
    let canonical = json!({ "command": command, "config": config }).to_string();
    format!("{:x}", Sha256::digest(canonical.as_bytes()))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn pretty(v: &serde_json::Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s.into_bytes()
}

fn csv_bytes(t: &Table) -> Result<Vec<u8>, CliError> {
    t.to_csv().map_err(|e| CliError::Numerical(format!("csv encoding: {e}")))
}

pub fn write_outcome(
    dir: &Path,
    command: &str,
    config: &ExperimentConfig,
    outcome: &Outcome,
    started: Instant,
) -> Result<(), CliError> {
    let mkdir = |p: &Path| {
        std::fs::create_dir_all(p).map_err(|source| CliError::Io {
            path: p.to_owned(),
            source,
        })
    };
    mkdir(dir)?;
    let mut files = vec!["results.csv".to_string(), "results.json".to_string()];
    write(&dir.join("results.csv"), &csv_bytes(&outcome.table)?)?;
    let results = json!({
        "statement": outcome.statement,
        "command": command,
        "config": config,
        "result": outcome.result,
    });
    write(&dir.join("results.json"), &pretty(&results))?;
    if !outcome.dumps.is_empty() {
        let sub = dir.join("coefficients");
        mkdir(&sub)?;
        for (name, table) in &outcome.dumps {
            write(&sub.join(name), &csv_bytes(table)?)?;
            files.push(format!("coefficients/{name}"));
        }
    }
    files.push("manifest.json".to_string());
    let manifest = json!({
        "command": command,
        "statement": outcome.statement,
        "config_sha256": config_hash(command, config),
        "seed": config.seed,
        "version": env!("CARGO_PKG_VERSION"),
        "parallel": expsys::Exec::default().is_parallel(),
        "threads": std::env::var(crate::THREADS_VAR).ok(),
        "wall_clock_seconds": started.elapsed().as_secs_f64(),
        "timestamp": chrono::Utc::now().to_rfc3339(),
        "files": files,
    });
    write(&dir.join("manifest.json"), &pretty(&manifest))
}
