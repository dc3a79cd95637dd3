use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::certify::GramFactorization;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{Generator, IntervalUnion};

/// Irrational shift of the probe grid, `φ - 1`.
pub const GOLDEN_OFFSET: f64 = 0.618_033_988_749_894_9;

/// Default probe density per unit length.
pub const DEFAULT_PER_UNIT: usize = 96;

/// Default truncation ladder.
pub const DEFAULT_RADII: [f64; 4] = [8.0, 16.0, 32.0, 64.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Minimality,
    Completeness,
}

/// Probe frequencies for completeness curves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WGrid {
    pub points: Vec<f64>,
    pub description: String,
}

impl WGrid {
    /// `per_unit` equispaced points on `[-R/3, R/3]`, shifted by `(φ - 1)/per_unit`.
    pub fn central_third(radius: f64, per_unit: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::param("R", format!("must be positive, got {radius}")));
        }
        if per_unit == 0 {
            return Err(Error::param("per_unit", "must be positive"));
        }
        let (lo, hi) = (-radius / 3.0, radius / 3.0);
        let step = 1.0 / per_unit as f64;
        let points: Vec<f64> = (0..)
            .map(|k| lo + (k as f64 + GOLDEN_OFFSET) * step)
            .take_while(|&w| w <= hi)
            .collect();
        Ok(WGrid {
            points,
            description: format!("{per_unit} per unit on [{lo}, {hi}], offset (phi-1)/{per_unit}"),
        })
    }

    pub fn explicit(points: Vec<f64>) -> Self {
        let description = format!("{} explicit points", points.len());
        WGrid { points, description }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffPoint {
    pub budget: f64,
    /// Supremum of the residual over the probe set.
    pub residual: f64,
    /// Probe at which the supremum is attained (first in probe order on ties).
    pub worst_probe: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffCurve {
    pub kind: CertificateKind,
    /// Radius of the frequency window `Λ ∩ [-N, N]`.
    pub window_radius: f64,
    pub window_size: usize,
    pub probes: String,
    pub probe_count: usize,
    pub measure: f64,
    pub points: Vec<TradeoffPoint>,
}

impl TradeoffCurve {
    /// Two-column curve plus the worst probe.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("budget,residual,worst_probe\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", p.budget, p.residual, p.worst_probe);
        }
        out
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.residual).collect()
    }
}

/// Ordered sup over probes, so parallel and sequential runs agree bit for bit.
fn worst(budgets: &[f64], probes: &[f64], per_probe: &[Vec<f64>]) -> Vec<TradeoffPoint> {
    budgets
        .iter()
        .enumerate()
        .map(|(j, &budget)| {
            let mut point = TradeoffPoint {
                budget,
                residual: f64::NEG_INFINITY,
                worst_probe: f64::NAN,
            };
            for (p, row) in probes.iter().zip(per_probe) {
                if row[j] > point.residual {
                    point.residual = row[j];
                    point.worst_probe = *p;
                }
            }
            point
        })
        .collect()
}

/// Worst minimality residual over `λ` in the central third of `Λ ∩ [-R, R]`,
/// for each norm budget `M`.
pub fn minimality_tradeoff(
    set: &IntervalUnion,
    generator: &Generator,
    radius: f64,
    budgets: &[f64],
    exec: Exec,
) -> Result<TradeoffCurve> {
    let window = generator.symmetric_window(radius)?;
    let factor = GramFactorization::new(set, &window, exec)?;
    let probes: Vec<usize> = (0..window.len())
        .filter(|&k| window.points()[k].abs() <= radius / 3.0)
        .collect();
    if probes.is_empty() {
        return Err(Error::param("R", "no frequency in the central third of the window"));
    }
    let rows = exec.map(&probes, |&k| {
        factor
            .minimality_curve(k, budgets)
            .map(|curve| curve.iter().map(|c| c.residual).collect::<Vec<_>>())
    });
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<Result<_>>()?;
    let probe_points: Vec<f64> = probes.iter().map(|&k| window.points()[k]).collect();
    Ok(TradeoffCurve {
        kind: CertificateKind::Minimality,
        window_radius: radius,
        window_size: window.len(),
        probes: format!("lambda in the window with |lambda| <= {}", radius / 3.0),
        probe_count: probes.len(),
        measure: set.measure(),
        points: worst(budgets, &probe_points, &rows),
    })
}

/// Worst completeness residual over the probe grid, for each coefficient
/// budget `C`. The frequency window `Λ ∩ [-N, N]` must contain the grid in
/// its central third.
pub fn completeness_tradeoff(
    set: &IntervalUnion,
    generator: &Generator,
    window_radius: f64,
    grid: &WGrid,
    budgets: &[f64],
    exec: Exec,
) -> Result<TradeoffCurve> {
    if grid.points.is_empty() {
        return Err(Error::param("w-grid", "is empty"));
    }
    let reach = grid.points.iter().fold(0.0_f64, |m, w| m.max(w.abs()));
    if reach > window_radius / 3.0 * (1.0 + 1e-12) {
        return Err(Error::param(
            "w-grid",
            format!("reaches |w| = {reach}, outside the central third of [-{window_radius}, {window_radius}]"),
        ));
    }
    let window = generator.symmetric_window(window_radius)?;
    let factor = GramFactorization::new(set, &window, exec)?;
    let rows = exec.map(&grid.points, |&w| {
        factor
            .completeness_curve(w, budgets)
            .map(|curve| curve.iter().map(|c| c.residual).collect::<Vec<_>>())
    });
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<Result<_>>()?;
    Ok(TradeoffCurve {
        kind: CertificateKind::Completeness,
        window_radius,
        window_size: window.len(),
        probes: grid.description.clone(),
        probe_count: grid.points.len(),
        measure: set.measure(),
        points: worst(budgets, &grid.points, &rows),
    })
}
