//! One function per subcommand. Each validates its slice of the config,
//! calls into the library and returns a table plus a JSON result.

use expsys::certificates::{completeness_tradeoff, minimality_tradeoff, GramFactorization, TradeoffCurve, WGrid};
use expsys::constructions::{example_sequence, sharpness_set, truncation_approximant, NamedSequence};
use expsys::density::{default_radius, density_with, DensityMode};
use expsys::duality::{duality_experiment, DualityConfig};
use expsys::fourier::{bessel_bound, gram_with, stability_ratio};
use expsys::geometry::parse_rational;
use expsys::spectral::{extract_stable_subspace, CMatrix, ProjectionKernel};
use expsys::{Exec, FrequencySet, Generator, IntervalUnion};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde_json::json;

use crate::config::{at_least_one, positive, positive_list, require, ExperimentConfig, ModeChoice};
use crate::error::CliError;
use crate::output::{num, opt, Outcome, Table};

type Run = Result<Outcome, CliError>;

/// Largest integration half-width the CLI will attempt.
const MAX_HALF_WIDTH: f64 = 1e6;

fn set(cfg: &ExperimentConfig) -> Result<IntervalUnion, CliError> {
    require(&cfg.set, "set")
}

fn generator(cfg: &ExperimentConfig) -> Result<Generator, CliError> {
    require(&cfg.generator, "generator")
}

fn radius(cfg: &ExperimentConfig, default: f64) -> Result<f64, CliError> {
    positive(cfg.radius.unwrap_or(default), "radius")
}

fn radii(cfg: &ExperimentConfig, default: &[f64]) -> Result<Vec<f64>, CliError> {
    positive_list(cfg.radii.as_deref().unwrap_or(default), "radii")
}

fn budgets(cfg: &ExperimentConfig, default: &[f64]) -> Result<Vec<f64>, CliError> {
    positive_list(cfg.budgets.as_deref().unwrap_or(default), "budgets")
}

fn window(g: &Generator, r: f64) -> Result<FrequencySet, CliError> {
    let w = g.symmetric_window(r)?;
    if w.is_empty() {
        return Err(CliError::invalid("radius", format!("no frequency in [-{r}, {r}]")));
    }
    Ok(w)
}

fn rng(cfg: &ExperimentConfig) -> Result<ChaCha8Rng, CliError> {
    let seed = cfg
        .seed
        .ok_or_else(|| CliError::invalid("seed", "is required for randomized runs"))?;
    Ok(ChaCha8Rng::seed_from_u64(seed))
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn exact(x: f64, field: &str) -> Result<num_rational::Rational64, CliError> {
    parse_rational(&num(x)).map_err(|e| CliError::invalid(field, e.to_string()))
}

fn coefficient_table(freqs: &[f64], coefficients: &[Complex64]) -> Table {
    let mut t = Table::new(&["index", "frequency", "re", "im"]);
    for (k, (f, c)) in freqs.iter().zip(coefficients).enumerate() {
        t.push(vec![k.to_string(), num(*f), num(c.re), num(c.im)]);
    }
    t
}

fn curve_table(curves: &[TradeoffCurve]) -> Table {
    let mut t = Table::new(&["R", "budget", "residual", "worst_probe"]);
    for c in curves {
        for p in &c.points {
            t.push(vec![num(c.window_radius), num(p.budget), num(p.residual), num(p.worst_probe)]);
        }
    }
    t
}

pub fn density(cfg: &ExperimentConfig) -> Run {
    let g = generator(cfg)?;
    let r_max = match cfg.rmax {
        Some(r) => positive(r, "rmax")?,
        None => default_radius(&g)?,
    };
    let modes = match cfg.mode.unwrap_or(ModeChoice::Upper) {
        ModeChoice::Upper => vec![DensityMode::Upper],
        ModeChoice::Lower => vec![DensityMode::Lower],
        ModeChoice::Both => vec![DensityMode::Lower, DensityMode::Upper],
    };
    let mut table = Table::new(&["mode", "r", "extremal_count", "estimate"]);
    let mut estimates = Vec::new();
    for mode in modes {
        let est = density_with(&g, r_max, mode, Exec::default())?;
        let name = match mode {
            DensityMode::Upper => "upper",
            DensityMode::Lower => "lower",
        };
        for ((r, c), e) in est.radii.iter().zip(&est.extremal_counts).zip(&est.estimates) {
            table.push(vec![name.into(), num(*r), c.to_string(), num(*e)]);
        }
        estimates.push((name, est));
    }
    let result = if estimates.len() == 1 {
        serde_json::to_value(&estimates[0].1)
    } else {
        serde_json::to_value(estimates.into_iter().collect::<std::collections::BTreeMap<_, _>>())
    }
    .map_err(|e| CliError::Numerical(e.to_string()))?;
    Outcome::new("beurling-density", table, result)
}

pub fn gram(cfg: &ExperimentConfig) -> Run {
    let s = set(cfg)?;
    let w = window(&generator(cfg)?, radius(cfg, 4.0)?)?;
    let g = gram_with(&s, &w, Exec::default())?;
    let eig = g.eigen()?;
    let p = w.points();
    let mut table = Table::new(&["j", "k", "lambda_j", "lambda_k", "re", "im"]);
    for j in 0..g.dim() {
        for k in 0..g.dim() {
            let z = g.entries()[(j, k)];
            table.push(vec![j.to_string(), k.to_string(), num(p[j]), num(p[k]), num(z.re), num(z.im)]);
        }
    }
    let result = json!({
        "dim": g.dim(),
        "measure": s.measure(),
        "frequencies": p,
        "min_eigenvalue": eig.min(),
        "max_eigenvalue": eig.max(),
        "psd_tolerance": g.psd_tolerance(),
    });
    Outcome::new("gram-matrix", table, result)
}

pub fn bessel(cfg: &ExperimentConfig) -> Run {
    let s = set(cfg)?;
    let g = generator(cfg)?;
    let mut table = Table::new(&["R", "size", "bessel_bound"]);
    let mut rows = Vec::new();
    for r in radii(cfg, &[4.0, 8.0, 16.0, 32.0])? {
        let w = window(&g, r)?;
        let b = bessel_bound(&s, &w)?;
        table.push(vec![num(r), w.len().to_string(), num(b)]);
        rows.push(json!({ "R": r, "size": w.len(), "bessel_bound": b }));
    }
    Outcome::new("bessel-bound", table, json!({ "measure": s.measure(), "rows": rows }))
}

pub fn stability(cfg: &ExperimentConfig) -> Run {
    let s = set(cfg)?;
    let w = window(&generator(cfg)?, radius(cfg, 10.0)?)?;
    let eta = positive(require(&cfg.eta, "eta")?, "eta")?;
    let instances = at_least_one(cfg.instances.unwrap_or(16), "instances")?;
    let mut rng = rng(cfg)?;
    let mut table = Table::new(&["instance", "eta", "ratio"]);
    let mut ratios = Vec::with_capacity(instances);
    for i in 0..instances {
        let mut rho: Vec<f64> = w.points().iter().map(|l| l + eta * rng.random_range(-1.0..=1.0)).collect();
        // pin the largest displacement to exactly eta
        rho[0] = w.points()[0] + eta;
        let a: Vec<Complex64> = (0..w.len()).map(|_| gaussian(&mut rng)).collect();
        let ratio = stability_ratio(&s, &w, &rho, &a)?;
        table.push(vec![i.to_string(), num(eta), num(ratio)]);
        ratios.push(ratio);
    }
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let result = json!({ "window_size": w.len(), "eta": eta, "max_ratio": max, "ratios": ratios });
    Outcome::new("perturbation-stability", table, result)
}

pub fn subspace_lemma(cfg: &ExperimentConfig) -> Run {
    let n = at_least_one(cfg.n.unwrap_or(64), "n")?;
    let d = require(&cfg.d, "d")?;
    let gamma = require(&cfg.gamma, "gamma")?;
    let instances = at_least_one(cfg.instances.unwrap_or(20), "instances")?;
    let probes = cfg.probes.unwrap_or(1000);
    let mut rng = rng(cfg)?;
    let mut table = Table::new(&[
        "instance",
        "dim",
        "dim_bound",
        "min_gain",
        "probe_min_gain",
        "gain_bound",
        "holds",
    ]);
    let mut all_hold = true;
    for i in 0..instances {
        let mut e = CMatrix::from_fn(n, n, |_, _| gaussian(&mut rng));
        // ‖E‖_HS = d√N, a hair inside the hypothesis
        let scale = d * (n as f64).sqrt() * (1.0 - 1e-12) / e.norm();
        e *= Complex64::new(scale, 0.0);
        let b = CMatrix::identity(n, n) + e;
        let basis = extract_stable_subspace(&b, d, gamma)?;
        let min_gain = basis.min_gain(&b)?;
        let mut probe_min = f64::INFINITY;
        if basis.dim > 0 {
            for _ in 0..probes {
                let z = CMatrix::from_fn(basis.dim, 1, |_, _| gaussian(&mut rng));
                let a = &basis.columns * (&z / Complex64::new(z.norm(), 0.0));
                probe_min = probe_min.min((&b * a).norm());
            }
        }
        let holds = basis.dim as f64 >= basis.dim_bound && min_gain >= basis.gain_bound() - 1e-9;
        all_hold &= holds;
        table.push(vec![
            i.to_string(),
            basis.dim.to_string(),
            num(basis.dim_bound),
            num(min_gain),
            num(probe_min),
            num(basis.gain_bound()),
            holds.to_string(),
        ]);
    }
    let result = json!({ "n": n, "d": d, "gamma": gamma, "instances": instances, "all_hold": all_hold });
    Outcome::new("stable-subspace-dimension", table, result)
}

pub fn projection_integral(cfg: &ExperimentConfig) -> Run {
    let s = set(cfg)?;
    let w = window(&generator(cfg)?, radius(cfg, 2.0)?)?;
    let kernel = ProjectionKernel::new(&s, w.points())?;
    let half_width = match cfg.half_width {
        Some(t) => positive(t, "half_width")?,
        None => kernel.half_width_for_tail(positive(cfg.tail_tol.unwrap_or(0.01), "tail_tol")?),
    };
    if half_width > MAX_HALF_WIDTH {
        return Err(CliError::invalid(
            "half_width",
            format!("T = {half_width} exceeds {MAX_HALF_WIDTH}; loosen tail_tol or pass --T"),
        ));
    }
    let r = kernel.integrate(half_width, Exec::default());
    let mut table = Table::new(&["half_width", "value", "dim", "tail_bound", "quadrature_error"]);
    table.push(vec![
        num(r.half_width),
        num(r.value),
        r.dim.to_string(),
        num(r.tail_bound),
        num(r.quadrature_error),
    ]);
    Outcome::new("projection-trace-identity", table, &r)
}

pub fn certify_min(cfg: &ExperimentConfig) -> Run {
    let s = set(cfg)?;
    let g = generator(cfg)?;
    let r = radius(cfg, 8.0)?;
    let budgets = budgets(cfg, &[1.0, 2.0, 4.0, 8.0, 16.0])?;
    let Some(lambda) = cfg.lambda else {
        if cfg.dump_coefficients == Some(true) {
            return Err(CliError::invalid("dump_coefficients", "needs a single lambda"));
        }
        let c = minimality_tradeoff(&s, &g, r, &budgets, Exec::default())?;
        return Outcome::new("approximate-minimality", curve_table(std::slice::from_ref(&c)), &c);
    };
    let w = window(&g, r)?;
    let index = w
        .index_of(lambda)
        .ok_or_else(|| CliError::invalid("lambda", format!("{lambda} is not in the window")))?;
    let curve = GramFactorization::new(&s, &w, Exec::default())?.minimality_curve(index, &budgets)?;
    let mut table = Table::new(&["budget", "residual", "achieved_norm", "multiplier", "budget_active"]);
    let mut dumps = Vec::new();
    for (i, c) in curve.iter().enumerate() {
        table.push(vec![
            num(c.budget),
            num(c.residual),
            num(c.achieved_norm),
            num(c.multiplier),
            c.budget_active.to_string(),
        ]);
        if cfg.dump_coefficients == Some(true) {
            dumps.push((format!("minimality_{i}.csv"), coefficient_table(w.points(), &c.coefficients)));
        }
    }
    let summary: Vec<_> = curve.into_iter().map(|c| c.without_coefficients()).collect();
    let mut out = Outcome::new("approximate-minimality", table, json!({ "lambda": lambda, "certificates": summary }))?;
    out.dumps = dumps;
    Ok(out)
}

pub fn certify_comp(cfg: &ExperimentConfig) -> Run {
    let s = set(cfg)?;
    let g = generator(cfg)?;
    let r = radius(cfg, 16.0)?;
    let budgets = budgets(cfg, &[1.0, 4.0, 16.0])?;
    let Some(w0) = cfg.w else {
        if cfg.dump_coefficients == Some(true) {
            return Err(CliError::invalid("dump_coefficients", "needs a single w"));
        }
        let grid = WGrid::central_third(r, cfg.per_unit.unwrap_or(16))?;
        let c = completeness_tradeoff(&s, &g, r, &grid, &budgets, Exec::default())?;
        return Outcome::new("approximate-completeness-floor", curve_table(std::slice::from_ref(&c)), &c);
    };
    if cfg.per_unit.is_some() {
        return Err(CliError::invalid("per_unit", "only applies without w"));
    }
    let w = window(&g, r)?;
    let curve = GramFactorization::new(&s, &w, Exec::default())?.completeness_curve(w0, &budgets)?;
    let mut table = Table::new(&["budget", "residual", "coeff_norm_sq", "multiplier", "budget_active"]);
    let mut dumps = Vec::new();
    for (i, c) in curve.iter().enumerate() {
        table.push(vec![
            num(c.budget),
            num(c.residual),
            num(c.coeff_norm_sq),
            num(c.multiplier),
            c.budget_active.to_string(),
        ]);
        if cfg.dump_coefficients == Some(true) {
            dumps.push((format!("completeness_{i}.csv"), coefficient_table(w.points(), &c.coefficients)));
        }
    }
    let summary: Vec<_> = curve.into_iter().map(|c| c.without_coefficients()).collect();
    let mut out = Outcome::new("approximate-completeness-floor", table, json!({ "w": w0, "certificates": summary }))?;
    out.dumps = dumps;
    Ok(out)
}

pub fn tradeoff_min(cfg: &ExperimentConfig) -> Run {
    let s = set(cfg)?;
    let g = generator(cfg)?;
    let budgets = budgets(cfg, &[1.0, 2.0, 4.0, 8.0, 16.0])?;
    let curves = radii(cfg, &[8.0, 16.0, 32.0])?
        .into_iter()
        .map(|r| minimality_tradeoff(&s, &g, r, &budgets, Exec::default()))
        .collect::<Result<Vec<_>, _>>()?;
    Outcome::new("minimality-density-floor", curve_table(&curves), json!({ "curves": curves }))
}

pub fn tradeoff_comp(cfg: &ExperimentConfig) -> Run {
    let s = set(cfg)?;
    let g = generator(cfg)?;
    let budgets = budgets(cfg, &[1.0, 4.0, 16.0, 64.0])?;
    let radii = radii(cfg, &[16.0, 32.0, 64.0])?;
    // one probe grid for the whole ladder, so the residual series is comparable across R
    let smallest = radii.iter().copied().fold(f64::INFINITY, f64::min);
    let grid = WGrid::central_third(smallest, cfg.per_unit.unwrap_or(16))?;
    let curves = radii
        .iter()
        .map(|&r| completeness_tradeoff(&s, &g, r, &grid, &budgets, Exec::default()))
        .collect::<Result<Vec<_>, _>>()?;
    Outcome::new("completeness-density-floor", curve_table(&curves), json!({ "curves": curves }))
}

pub fn sharpness(cfg: &ExperimentConfig) -> Run {
    let d = exact(require(&cfg.d, "d")?, "d")?;
    let eps = exact(require(&cfg.eps, "eps")?, "eps")?;
    let top = at_least_one(cfg.n.unwrap_or(64), "n")?;
    let budgets = budgets(cfg, &[1.0])?;
    let per_unit = cfg.per_unit.unwrap_or(16);
    let inst = sharpness_set(d, eps)?;
    let target = inst.target_residual();
    let mut ladder: Vec<usize> = [top / 8, top / 4, top / 2, top].into_iter().filter(|&r| r >= 3).collect();
    ladder.dedup();
    if ladder.is_empty() {
        return Err(CliError::invalid("n", "largest radius must be at least 3"));
    }
    let mut table = Table::new(&["R", "budget", "residual", "target", "truncation_residual"]);
    let mut rows = Vec::new();
    for &r in &ladder {
        let rf = r as f64;
        let grid = WGrid::central_third(rf, per_unit)?;
        let curve = completeness_tradeoff(&inst.set, &Generator::integers(), rf, &grid, &budgets, Exec::default())?;
        let trunc = truncation_approximant(&inst, 0.37, r as u32)?;
        for p in &curve.points {
            table.push(vec![num(rf), num(p.budget), num(p.residual), num(target), num(trunc.residual)]);
        }
        rows.push(json!({ "R": rf, "points": curve.points, "truncation_residual": trunc.residual }));
    }
    let result = json!({
        "d": inst.d.to_string(),
        "n": inst.n,
        "alpha": inst.alpha.to_string(),
        "measure": inst.measure().to_string(),
        "identities_hold": inst.identities_hold(),
        "target_residual": target,
        "rows": rows,
    });
    Outcome::new("completeness-floor-sharpness", table, result)
}

pub fn duality(cfg: &ExperimentConfig) -> Run {
    let s = set(cfg)?;
    let g = generator(cfg)?;
    let defaults = DualityConfig::default();
    let config = DualityConfig {
        radii: radii(cfg, &defaults.radii)?,
        minimality_budget: positive(cfg.minimality_budget.unwrap_or(defaults.minimality_budget), "minimality_budget")?,
        completeness_budget: cfg
            .completeness_budget
            .map(|c| positive(c, "completeness_budget"))
            .transpose()?,
        per_unit: at_least_one(cfg.per_unit.unwrap_or(defaults.per_unit), "per_unit")?,
    };
    let report = duality_experiment(&s, &g, &config)?;
    let mut table = Table::new(&["R", "A_riesz", "B_riesz", "A_frame", "B_frame", "min_residual", "comp_residual"]);
    for row in &report.rows {
        table.push(vec![
            num(row.radius),
            opt(row.riesz_lower),
            opt(row.riesz_upper),
            num(row.frame_lower),
            num(row.frame_upper),
            opt(row.minimality_residual),
            num(row.completeness_residual),
        ]);
    }
    Outcome::new("complement-duality", table, &report)
}

pub fn examples(cfg: &ExperimentConfig) -> Run {
    let r = radius(cfg, 8.0)?;
    let r_max = positive(cfg.rmax.unwrap_or(1024.0), "rmax")?;
    let mut named: Vec<(String, Generator)> = [
        NamedSequence::OddEven,
        NamedSequence::OddEvenZero,
        NamedSequence::NegOddEvenZero,
    ]
    .into_iter()
    .map(|n| Ok((key(n), example_sequence(n)?)))
    .collect::<Result<_, expsys::Error>>()?;
    named.push((
        format!("complement:{}", key(NamedSequence::NegOddEvenZero)),
        Generator::integer_complement(Generator::named(NamedSequence::NegOddEvenZero)),
    ));
    let mut table = Table::new(&["name", "window_count", "lower_density", "upper_density"]);
    let mut rows = Vec::new();
    for (name, g) in named {
        let pts = g.symmetric_window(r)?.into_points();
        let lo = density_with(&g, r_max, DensityMode::Lower, Exec::default())?.plateau;
        let up = density_with(&g, r_max, DensityMode::Upper, Exec::default())?.plateau;
        table.push(vec![name.clone(), pts.len().to_string(), num(lo), num(up)]);
        rows.push(json!({ "name": name, "points": pts, "lower_density": lo, "upper_density": up }));
    }
    Outcome::new("example-sequences", table, json!({ "R": r, "rmax": r_max, "sequences": rows }))
}

fn key(n: NamedSequence) -> String {
    serde_json::to_value(n)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}
