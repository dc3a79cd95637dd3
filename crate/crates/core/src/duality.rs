//! Finite-section experiments on the torus: a set `S ⊆ [0, 1]` with
//! `Λ ⊆ Z` against the complementary pair `S^c = [0, 1] \ S`,
//! `Λ^c = Z \ Λ`.
//!
//! Riesz bounds of a finite system are the extreme Gram eigenvalues. Frame
//! bounds need an infinite analysis family, so they are estimated on a
//! test space of local Fourier modes
//! `1_I(t) e^{2πimt/|I|}/√|I|` with `|m/|I|| ≤ R_test` on each component
//! interval `I` of `S`. These are orthonormal in `L²(S)`, so the bounds are
//! the extreme eigenvalues of `T*T` for the analysis matrix
//! `T[λ][j] = ⟨φ_j, e_λ⟩`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::certificates::{completeness_tradeoff, minimality_tradeoff, WGrid};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fourier::{interval_transform, synthesis_gram};
use crate::geometry::{FrequencySet, Generator, IntervalUnion};
use crate::spectral::dense::{CMatrix, HermitianEigen, Svd};

/// `(A, B)`: extreme eigenvalues of the Gram matrix of `E(Λ)` in `L²(S)`.
pub fn riesz_bounds(set: &IntervalUnion, frequencies: &FrequencySet) -> Result<(f64, f64)> {
    if frequencies.is_empty() {
        return Err(Error::EmptyFrequencySet);
    }
    let e = HermitianEigen::new(&synthesis_gram(set, frequencies.points(), Exec::Sequential))?;
    Ok((e.min().max(0.0), e.max()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub test_radius: f64,
    pub test_dim: usize,
    pub window_size: usize,
}

/// Orthonormal local Fourier modes `(a, b, m/|I|)` on each component of `S`.
fn local_modes(set: &IntervalUnion, test_radius: f64) -> Vec<(f64, f64, f64)> {
    let mut modes = Vec::new();
    for (a, b) in set.bounds() {
        let len = b - a;
        let top = (test_radius * len + 1e-9).floor() as i64;
        for m in -top..=top {
            modes.push((a, b, m as f64 / len));
        }
    }
    modes
}

/// Finite-section frame bounds of `E(Λ)` on `S ⊆ [0, 1]`, tested on local
/// Fourier modes of frequency at most `test_radius`.
pub fn frame_bounds_torus(set: &IntervalUnion, frequencies: &FrequencySet, test_radius: f64) -> Result<FrameBounds> {
    if !set.is_subset_of(&IntervalUnion::unit()) {
        return Err(Error::param("S", "must lie inside [0, 1]"));
    }
    if frequencies.is_empty() {
        return Err(Error::EmptyFrequencySet);
    }
    if !(test_radius >= 0.0 && test_radius.is_finite()) {
        return Err(Error::param("R_test", format!("must be nonnegative, got {test_radius}")));
    }
    let modes = local_modes(set, test_radius);
    let pts = frequencies.points();
    let t = CMatrix::from_fn(pts.len(), modes.len(), |r, c| {
        let (a, b, nu) = modes[c];
        interval_transform(a, b, pts[r] - nu) / (b - a).sqrt()
    });
    let svd = Svd::new(&t)?;
    // more test functions than frequencies means T*T has a kernel
    let lower = if modes.len() > pts.len() { 0.0 } else { svd.min().powi(2) };
    let upper = svd.singular_values.first().copied().unwrap_or(0.0).powi(2);
    Ok(FrameBounds {
        lower,
        upper,
        test_radius,
        test_dim: modes.len(),
        window_size: pts.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityConfig {
    pub radii: Vec<f64>,
    /// Norm budget `M` for the minimality side.
    pub minimality_budget: f64,
    /// Coefficient budget `C`; `None` takes the squared largest dual norm of
    /// the complementary system at each radius.
    pub completeness_budget: Option<f64>,
    pub per_unit: usize,
}

impl Default for DualityConfig {
    fn default() -> Self {
        DualityConfig {
            radii: vec![4.0, 8.0, 16.0, 32.0],
            minimality_budget: 4.0,
            completeness_budget: None,
            per_unit: 16,
        }
    }
}

/// One rung of the radius ladder. The `Λ` window is `[-R, R]` with test
/// frequencies up to `R/2`; the complementary window is `[-2R, 2R]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityRow {
    pub radius: f64,
    pub riesz_lower: Option<f64>,
    pub riesz_upper: Option<f64>,
    pub frame_lower: f64,
    pub frame_upper: f64,
    /// Worst minimality residual of `E(Λ^c)` in `L²(S^c)` at budget `M`.
    pub minimality_residual: Option<f64>,
    /// Worst completeness residual of `E(Λ)` in `L²(S)` at budget `C`.
    pub completeness_residual: f64,
    pub completeness_budget: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualityReport {
    pub set: IntervalUnion,
    pub complement: Option<IntervalUnion>,
    pub generator: Generator,
    pub complement_generator: Generator,
    pub config: DualityConfig,
    /// Set when `S^c` has measure zero and the complementary side is empty.
    pub vacuous: bool,
    pub rows: Vec<DualityRow>,
}

impl DualityReport {
    pub fn to_csv(&self) -> String {
        fn opt(v: Option<f64>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        let mut out = String::from("R,A_riesz,B_riesz,A_frame,B_frame,min_residual,comp_residual\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.radius,
                opt(r.riesz_lower),
                opt(r.riesz_upper),
                r.frame_lower,
                r.frame_upper,
                opt(r.minimality_residual),
                r.completeness_residual
            );
        }
        out
    }
}

/// `max_k (G⁺)_{kk}` over the central third: the squared norm of the
/// largest biorthogonal dual functional.
fn largest_dual_norm_sq(set: &IntervalUnion, window: &FrequencySet, radius: f64) -> Result<f64> {
    let gram = synthesis_gram(set, window.points(), Exec::Sequential);
    let e = HermitianEigen::new(&gram)?;
    let floor = crate::certificates::EIGEN_FLOOR * set.measure() * window.len() as f64;
    let mut best = 0.0_f64;
    for (k, &p) in window.points().iter().enumerate() {
        if p.abs() > radius / 3.0 {
            continue;
        }
        let diag: f64 = (0..e.dim())
            .filter(|&j| e.values[j] > floor)
            .map(|j| e.vectors[(k, j)].norm_sqr() / e.values[j])
            .sum();
        best = best.max(diag);
    }
    Ok(best)
}

pub fn duality_experiment(set: &IntervalUnion, generator: &Generator, config: &DualityConfig) -> Result<DualityReport> {
    let unit = IntervalUnion::unit();
    if !set.is_subset_of(&unit) {
        return Err(Error::param("S", "must lie inside [0, 1]"));
    }
    if config.radii.is_empty() || config.radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::param("radii", "must be a nonempty list of positive radii"));
    }
    let largest = config.radii.iter().fold(0.0_f64, |m, &r| m.max(r));
    if !generator.is_integer_valued(2.0 * largest)? {
        return Err(Error::param("generator", "must consist of integers"));
    }
    let complement = match set.complement_in(&unit) {
        Ok(c) => Some(c),
        Err(Error::ZeroMeasure) => None,
        Err(e) => return Err(e),
    };
    let complement_generator = Generator::integer_complement(generator.clone());
    let vacuous = complement.is_none();

    let rows = Exec::default().map(&config.radii, |&radius| -> Result<DualityRow> {
        let window = generator.symmetric_window(radius)?;
        let frame = frame_bounds_torus(set, &window, radius / 2.0)?;
        let mut row = DualityRow {
            radius,
            riesz_lower: None,
            riesz_upper: None,
            frame_lower: frame.lower,
            frame_upper: frame.upper,
            minimality_residual: None,
            completeness_residual: f64::NAN,
            completeness_budget: config.completeness_budget.unwrap_or(1.0),
        };
        if let Some(sc) = &complement {
            let cwindow = complement_generator.symmetric_window(2.0 * radius)?;
            if !cwindow.is_empty() {
                let (a, b) = riesz_bounds(sc, &cwindow)?;
                row.riesz_lower = Some(a);
                row.riesz_upper = Some(b);
                let curve = minimality_tradeoff(
                    sc,
                    &complement_generator,
                    2.0 * radius,
                    &[config.minimality_budget],
                    Exec::Sequential,
                );
                row.minimality_residual = curve.ok().map(|c| c.points[0].residual);
                if config.completeness_budget.is_none() {
                    row.completeness_budget = largest_dual_norm_sq(sc, &cwindow, 2.0 * radius)?.max(1.0);
                }
            }
        }
        let grid = WGrid::central_third(radius, config.per_unit)?;
        let curve = completeness_tradeoff(set, generator, radius, &grid, &[row.completeness_budget], Exec::Sequential)?;
        row.completeness_residual = curve.points[0].residual;
        Ok(row)
    });
    Ok(DualityReport {
        set: set.clone(),
        complement,
        generator: generator.clone(),
        complement_generator,
        config: config.clone(),
        vacuous,
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}

/// `Gram(S, Λ) + Gram(S^c, Λ) - I` in max-entry norm, for `Λ ⊆ Z`.
pub fn complement_identity_defect(set: &IntervalUnion, frequencies: &FrequencySet) -> Result<f64> {
    let unit = IntervalUnion::unit();
    let n = frequencies.len();
    let g = synthesis_gram(set, frequencies.points(), Exec::Sequential);
    let gc = match set.complement_in(&unit) {
        Ok(c) => synthesis_gram(&c, frequencies.points(), Exec::Sequential),
        Err(Error::ZeroMeasure) => CMatrix::zeros(n, n),
        Err(e) => return Err(e),
    };
    let sum = g + gc - CMatrix::identity(n, n);
    Ok(sum.iter().map(|z| z.norm()).fold(0.0, f64::max))
}
