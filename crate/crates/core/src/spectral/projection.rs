use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::dense::HermitianEigen;
use super::quadrature::integrate_panels;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fourier::{analysis_vector, synthesis_gram};
use crate::geometry::IntervalUnion;

/// Per-panel absolute tolerance of the projection-integral quadrature.
pub const PANEL_TOLERANCE: f64 = 1e-8;

/// Relative eigenvalue floor below which the spanning Gram is treated as singular.
pub const RANK_FLOOR: f64 = 1e-12;

/// `x ↦ ‖P_W e_x‖²_{L²(S)}` for `W = span{e_μ}`, with the Gram of the spanning
/// exponentials factored once.
#[derive(Clone, Debug)]
pub struct ProjectionKernel {
    set: IntervalUnion,
    frequencies: Vec<f64>,
    eigen: HermitianEigen,
    kept: usize,
    warning: Option<String>,
}

impl ProjectionKernel {
    pub fn new(set: &IntervalUnion, frequencies: &[f64]) -> Result<Self> {
        if frequencies.is_empty() {
            return Err(Error::EmptyFrequencySet);
        }
        let gram = synthesis_gram(set, frequencies, Exec::Sequential);
        let eigen = HermitianEigen::new(&gram)?;
        let trace: f64 = eigen.values.iter().sum();
        let floor = RANK_FLOOR * trace;
        let kept = eigen.values.iter().filter(|&&s| s > floor).count();
        let warning = (kept < frequencies.len()).then(|| {
            format!(
                "spanning Gram is numerically singular: {} of {} eigenvalues below {floor:e}; effective dimension {kept}",
                frequencies.len() - kept,
                frequencies.len()
            )
        });
        if kept == 0 {
            return Err(Error::Numerical("spanning Gram has no eigenvalue above the floor".into()));
        }
        Ok(ProjectionKernel {
            set: set.clone(),
            frequencies: frequencies.to_vec(),
            eigen,
            kept,
            warning,
        })
    }

    /// Dimension of `W` after the rank-revealing truncation.
    pub fn dim(&self) -> usize {
        self.kept
    }

    pub fn warning(&self) -> Option<&str> {
        self.warning.as_deref()
    }

    fn kept_range(&self) -> std::ops::Range<usize> {
        let n = self.eigen.dim();
        (n - self.kept)..n
    }

    /// `‖P_W e_x‖² = h* G⁺ h` with `h[μ] = ⟨e_x, e_μ⟩`.
    pub fn density(&self, x: f64) -> f64 {
        let h = analysis_vector(&self.set, &self.frequencies, x);
        self.kept_range()
            .map(|k| {
                let col = self.eigen.vectors.column(k);
                let z: Complex64 = col.iter().zip(&h).map(|(u, hv)| u.conj() * hv).sum();
                z.norm_sqr() / self.eigen.values[k]
            })
            .sum()
    }

    fn smallest_kept(&self) -> f64 {
        self.eigen.values[self.eigen.dim() - self.kept]
    }

    fn max_frequency(&self) -> f64 {
        self.frequencies.iter().fold(0.0_f64, |m, f| m.max(f.abs()))
    }

    /// Upper bound for `∫_{|x| > T} ‖P_W e_x‖² dx`, from
    /// `|1̂_S(w)| ≤ K/(π|w|)` with `K` the number of intervals.
    pub fn tail_bound(&self, half_width: f64) -> f64 {
        let reach = half_width - self.max_frequency();
        if reach <= 0.0 {
            return self.kept as f64;
        }
        let k = self.set.len() as f64;
        let m = self.frequencies.len() as f64;
        let bound = 2.0 * m * k * k / (PI * PI * self.smallest_kept() * reach);
        bound.min(self.kept as f64)
    }

    /// Smallest `T` whose tail bound is at most `tol`.
    pub fn half_width_for_tail(&self, tol: f64) -> f64 {
        let k = self.set.len() as f64;
        let m = self.frequencies.len() as f64;
        self.max_frequency() + 2.0 * m * k * k / (PI * PI * self.smallest_kept() * tol)
    }

    /// Panel width resolving the oscillation of the integrand.
    fn panel_width(&self) -> f64 {
        let (lo, hi) = self.set.hull();
        0.5 / (1.0 + lo.abs().max(hi.abs()))
    }

    pub fn integrate(&self, half_width: f64, exec: Exec) -> ProjectionIntegral {
        let quad = integrate_panels(
            |x| self.density(x),
            -half_width,
            half_width,
            self.panel_width(),
            PANEL_TOLERANCE,
            exec,
        );
        ProjectionIntegral {
            value: quad.value,
            dim: self.kept,
            nominal_dim: self.frequencies.len(),
            half_width,
            tail_bound: self.tail_bound(half_width),
            quadrature_error: quad.error,
            evaluations: quad.evaluations,
            warning: self.warning.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectionIntegral {
    /// `∫_{-T}^{T} ‖P_W e_x‖² dx`.
    pub value: f64,
    pub dim: usize,
    pub nominal_dim: usize,
    pub half_width: f64,
    /// Bound on the mass outside `[-T, T]`, to size `T`.
    pub tail_bound: f64,
    pub quadrature_error: f64,
    pub evaluations: usize,
    pub warning: Option<String>,
}

/// `∫_{-T}^{T} ‖P_W e_x‖²_{L²(S)} dx` for `W = span{e_μ : μ ∈ frequencies}`.
/// The full-line integral equals `dim W`.
pub fn projection_integral(set: &IntervalUnion, frequencies: &[f64], half_width: f64) -> Result<ProjectionIntegral> {
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::param("T", format!("must be positive and finite, got {half_width}")));
    }
    Ok(ProjectionKernel::new(set, frequencies)?.integrate(half_width, Exec::default()))
}
