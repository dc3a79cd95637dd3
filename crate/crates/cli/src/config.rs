//! Experiment configuration. Nested inputs (sets, generators, grids) can come
//! from a JSON file; scalar flags override whatever the file says.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use expsys::constructions::NamedSequence;
use expsys::{Generator, IntervalUnion};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ModeChoice {
    Upper,
    Lower,
    Both,
}

/// Everything a run depends on. The serialized form (unset keys omitted) is
/// what gets hashed into the manifest.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<IntervalUnion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Generator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Window radius `R`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rmax: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeChoice>,
    /// Norm budgets `M` or coefficient budgets `C`, depending on the command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimality_budget: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completeness_budget: Option<f64>,
    /// Probe points per unit length of the `w` grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_unit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Matrix size for `subspace-lemma`, largest window radius for `sharpness`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<usize>,
    /// Integration half-width `T`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dump_coefficients: Option<bool>,
}

/// Flags shared by every subcommand. Each command accepts only the keys it
/// uses; anything else is rejected rather than silently ignored.
#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// JSON file with any of the configuration keys.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "results")]
    pub out: PathBuf,
    /// Seed for randomized runs.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Set as JSON, e.g. '[[0,1]]' or '{"intervals":[[0,"1/2"]]}'.
    #[arg(long)]
    pub set: Option<String>,
    /// `integers`, `lattice:STEP[:OFFSET]`, `list:A,B,..`, a sequence name,
    /// `complement:NAME`, or generator JSON.
    #[arg(long)]
    pub generator: Option<String>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Window radius.
    #[arg(long = "R", value_name = "R")]
    pub radius: Option<f64>,
    /// Comma-separated radius ladder.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub radii: Option<Vec<f64>>,
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeChoice>,
    /// Comma-separated coefficient budgets.
    #[arg(long = "Cgrid", value_name = "C,..", value_delimiter = ',', num_args = 1.., conflicts_with_all = ["m_grid", "budget_m"])]
    pub c_grid: Option<Vec<f64>>,
    /// Comma-separated norm budgets.
    #[arg(long = "Mgrid", value_name = "M,..", value_delimiter = ',', num_args = 1.., conflicts_with_all = ["budget_c"])]
    pub m_grid: Option<Vec<f64>>,
    /// Single coefficient budget.
    #[arg(long = "C", value_name = "C", conflicts_with = "c_grid")]
    pub budget_c: Option<f64>,
    /// Single norm budget.
    #[arg(long = "M", value_name = "M", conflicts_with = "m_grid")]
    pub budget_m: Option<f64>,
    #[arg(long)]
    pub per_unit: Option<usize>,
    #[arg(long)]
    pub w: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long = "N", value_name = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub instances: Option<usize>,
    #[arg(long)]
    pub probes: Option<usize>,
    /// Integration half-width.
    #[arg(long = "T", value_name = "T")]
    pub half_width: Option<f64>,
    #[arg(long)]
    pub tail_tol: Option<f64>,
    /// Write per-certificate coefficient files.
    #[arg(long)]
    pub dump_coefficients: bool,
}

impl Flags {
    /// Loads the config file, if any, and lays the flags over it. Budgets
    /// given as `--C`/`--M` go to the per-kind keys when the command has two.
    pub fn resolve(&self, split_budgets: bool) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = &self.set {
            cfg.set = Some(parse_set(s)?);
        }
        if let Some(g) = &self.generator {
            cfg.generator = Some(parse_generator(g)?);
        }
        overlay(&mut cfg.seed, self.seed);
        overlay(&mut cfg.d, self.d);
        overlay(&mut cfg.eps, self.eps);
        overlay(&mut cfg.eta, self.eta);
        overlay(&mut cfg.gamma, self.gamma);
        overlay(&mut cfg.radius, self.radius);
        overlay(&mut cfg.radii, self.radii.clone());
        overlay(&mut cfg.rmax, self.rmax);
        overlay(&mut cfg.mode, self.mode);
        overlay(&mut cfg.per_unit, self.per_unit);
        overlay(&mut cfg.w, self.w);
        overlay(&mut cfg.lambda, self.lambda);
        overlay(&mut cfg.n, self.n);
        overlay(&mut cfg.instances, self.instances);
        overlay(&mut cfg.probes, self.probes);
        overlay(&mut cfg.half_width, self.half_width);
        overlay(&mut cfg.tail_tol, self.tail_tol);
        if self.dump_coefficients {
            cfg.dump_coefficients = Some(true);
        }
        if split_budgets {
            overlay(&mut cfg.minimality_budget, self.budget_m);
            overlay(&mut cfg.completeness_budget, self.budget_c);
            if self.c_grid.is_some() || self.m_grid.is_some() {
                return Err(CliError::invalid("budgets", "this command takes single budgets --M and --C"));
            }
        } else {
            let grid = self
                .c_grid
                .clone()
                .or_else(|| self.m_grid.clone())
                .or_else(|| self.budget_c.map(|c| vec![c]))
                .or_else(|| self.budget_m.map(|m| vec![m]));
            overlay(&mut cfg.budgets, grid);
        }
        Ok(cfg)
    }
}

fn overlay<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::invalid("config", format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid("config", e.to_string()))
}

pub fn parse_set(s: &str) -> Result<IntervalUnion, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::invalid("set", e.to_string()))
}

pub fn parse_generator(s: &str) -> Result<Generator, CliError> {
    let s = s.trim();
    let bad = |m: String| CliError::invalid("generator", m);
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| bad(e.to_string()));
    }
    let number = |x: &str| x.trim().parse::<f64>().map_err(|_| bad(format!("`{x}` is not a number")));
    let (head, rest) = s.split_once(':').unwrap_or((s, ""));
    match head {
        "integers" if rest.is_empty() => Ok(Generator::integers()),
        "lattice" => {
            let (step, offset) = rest.split_once(':').unwrap_or((rest, "0"));
            Ok(Generator::Lattice {
                step: number(step)?,
                offset: number(offset)?,
            })
        }
        "list" => {
            let points = rest.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
            Ok(Generator::list(points))
        }
        "complement" => {
            let base = NamedSequence::parse(rest).map_err(|e| bad(e.to_string()))?;
            Ok(Generator::integer_complement(Generator::named(base)))
        }
        name if rest.is_empty() => NamedSequence::parse(name)
            .map(Generator::named)
            .map_err(|_| bad(format!("unrecognized generator `{s}`"))),
        _ => Err(bad(format!("unrecognized generator `{s}`"))),
    }
}

impl ExperimentConfig {
    /// Keys that are set, in serialized order.
    pub fn keys(&self) -> Vec<String> {
        match serde_json::to_value(self) {
            Ok(serde_json::Value::Object(map)) => map.keys().cloned().collect(),
            _ => Vec::new(),
        }
    }

    /// Rejects keys the command does not read. `seed` is always accepted
    /// so batch scripts can pass one uniformly.
    pub fn check_keys(&self, command: &str, allowed: &[&str]) -> Result<(), CliError> {
        for key in self.keys() {
            if key != "seed" && !allowed.contains(&key.as_str()) {
                return Err(CliError::invalid(key.clone(), format!("not used by `{command}`")));
            }
        }
        Ok(())
    }
}

pub fn require<T: Clone>(value: &Option<T>, field: &str) -> Result<T, CliError> {
    value.clone().ok_or_else(|| CliError::invalid(field, "is required"))
}

pub fn positive(x: f64, field: &str) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::invalid(field, format!("must be positive and finite, got {x}")))
    }
}

pub fn positive_list(xs: &[f64], field: &str) -> Result<Vec<f64>, CliError> {
    if xs.is_empty() {
        return Err(CliError::invalid(field, "must not be empty"));
    }
    xs.iter().map(|&x| positive(x, field)).collect()
}

pub fn at_least_one(n: usize, field: &str) -> Result<usize, CliError> {
    if n == 0 {
        Err(CliError::invalid(field, "must be at least 1"))
    } else {
        Ok(n)
    }
}
