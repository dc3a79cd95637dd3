//! `expsys`: batch experiment runner.
//!
//! Every subcommand writes `results.csv`, `results.json` and `manifest.json`
//! into `--out`. Exit status is 0 on success, 2 when the inputs are rejected
//! and 3 when the numerics fail; in both failure cases a one-line JSON error
//! goes to stderr.

mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use config::{ExperimentConfig, Flags};
use error::CliError;

/// Sizes the worker pool; the only environment variable the runner reads.
pub const THREADS_VAR: &str = "EXPSYS_THREADS";

#[derive(Parser, Debug)]
#[command(name = "expsys", version, about = "Experiments on exponential systems over unions of intervals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Upper or lower Beurling density of a generator [generator, rmax, mode]
    Density(Flags),
    /// Gram matrix of a frequency window [set, generator, R]
    Gram(Flags),
    /// Largest Gram eigenvalue over a radius ladder [set, generator, radii]
    Bessel(Flags),
    /// Perturbation ratio under random displacements [set, generator, R, eta, instances, seed]
    Stability(Flags),
    /// Stable subspace of random near-identity matrices [N, d, gamma, instances, probes, seed]
    SubspaceLemma(Flags),
    /// Integral of the projection kernel against dim W [set, generator, R, T | tail-tol]
    ProjectionIntegral(Flags),
    /// Minimality certificates at one lambda or worst over the window [set, generator, R, Mgrid, lambda]
    CertifyMin(Flags),
    /// Completeness certificates at one w or worst over a grid [set, generator, R, Cgrid, w, per-unit]
    CertifyComp(Flags),
    /// Worst minimality residual over a radius ladder [set, generator, radii, Mgrid]
    TradeoffMin(Flags),
    /// Worst completeness residual over a radius ladder [set, generator, radii, Cgrid, per-unit]
    TradeoffComp(Flags),
    /// Completeness residual of the sharpness construction [d, eps, N, C, per-unit]
    Sharpness(Flags),
    /// Riesz, frame and certificate series for a set and its complement [set, generator, radii, M, C, per-unit]
    Duality(Flags),
    /// Named example sequences and their densities [R, rmax]
    Examples(Flags),
}

type Runner = fn(&ExperimentConfig) -> Result<output::Outcome, CliError>;

impl Command {
    fn parts(&self) -> (&'static str, &Flags, &'static [&'static str], Runner) {
        use Command::*;
        match self {
            Density(f) => ("density", f, &["generator", "rmax", "mode"], commands::density),
            Gram(f) => ("gram", f, &["set", "generator", "radius"], commands::gram),
            Bessel(f) => ("bessel", f, &["set", "generator", "radii"], commands::bessel),
            Stability(f) => (
                "stability",
                f,
                &["set", "generator", "radius", "eta", "instances"],
                commands::stability,
            ),
            SubspaceLemma(f) => (
                "subspace-lemma",
                f,
                &["n", "d", "gamma", "instances", "probes"],
                commands::subspace_lemma,
            ),
            ProjectionIntegral(f) => (
                "projection-integral",
                f,
                &["set", "generator", "radius", "half_width", "tail_tol"],
                commands::projection_integral,
            ),
            CertifyMin(f) => (
                "certify-min",
                f,
                &["set", "generator", "radius", "budgets", "lambda", "dump_coefficients"],
                commands::certify_min,
            ),
            CertifyComp(f) => (
                "certify-comp",
                f,
                &["set", "generator", "radius", "budgets", "w", "per_unit", "dump_coefficients"],
                commands::certify_comp,
            ),
            TradeoffMin(f) => ("tradeoff-min", f, &["set", "generator", "radii", "budgets"], commands::tradeoff_min),
            TradeoffComp(f) => (
                "tradeoff-comp",
                f,
                &["set", "generator", "radii", "budgets", "per_unit"],
                commands::tradeoff_comp,
            ),
            Sharpness(f) => ("sharpness", f, &["d", "eps", "n", "budgets", "per_unit"], commands::sharpness),
            Duality(f) => (
                "duality",
                f,
                &[
                    "set",
                    "generator",
                    "radii",
                    "minimality_budget",
                    "completeness_budget",
                    "per_unit",
                ],
                commands::duality,
            ),
            Examples(f) => ("examples", f, &["radius", "rmax"], commands::examples),
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::invalid(THREADS_VAR, format!("`{raw}` is not a thread count")))?;
    expsys::exec::configure_threads(n).map_err(|e| CliError::invalid(THREADS_VAR, e.to_string()))
}

fn run(command: &Command) -> Result<(), CliError> {
    let started = Instant::now();
    configure_threads()?;
    let (name, flags, allowed, runner) = command.parts();
    let cfg = flags.resolve(name == "duality")?;
    cfg.check_keys(name, allowed)?;
    let outcome = runner(&cfg)?;
    output::write_outcome(&flags.out, name, &cfg, &outcome, started)?;
    println!("{name}: wrote {}", flags.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::invalid("arguments", e.render().to_string().trim());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code());
        }
    };
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code())
        }
    }
}
