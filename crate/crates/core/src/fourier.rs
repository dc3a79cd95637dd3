//! Closed-form Fourier kernel of interval unions and the Gram matrices of
//! exponential systems built from it.
//!
//! Conventions: `e_λ(t) = exp(2πiλt)`, `f̂(w) = ∫ f(t) exp(-2πiwt) dt`, and
//! inner products are linear in the first slot, so
//! `⟨e_λ, e_γ⟩_{L²(S)} = 1̂_S(γ - λ)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{FrequencySet, IntervalUnion};
use crate::spectral::dense::{CMatrix, HermitianEigen};

/// Below this value of `|2πw(b-a)|` the per-interval kernel switches to its
/// Taylor expansion.
pub const TAYLOR_THRESHOLD: f64 = 1e-4;

/// PSD tolerance factor; the allowed negative eigenvalue is this times `|S|·N`.
pub const PSD_TOLERANCE: f64 = 1e-9;

/// `exp(-2πix)`, with the argument reduced modulo 1 first.
#[inline]
pub(crate) fn phase(x: f64) -> Complex64 {
    let r = x - x.round();
    let theta = -2.0 * PI * r;
    Complex64::new(theta.cos(), theta.sin())
}

/// `∫_a^b exp(-2πiwt) dt`.
#[inline]
pub(crate) fn interval_transform(a: f64, b: f64, w: f64) -> Complex64 {
    let len = b - a;
    let theta = 2.0 * PI * w * len;
    if theta.abs() < TAYLOR_THRESHOLD {
        // (1 - e^{-iθ})/(iθ) = 1 - iθ/2 - θ²/6 + iθ³/24 + O(θ⁴)
        let series = Complex64::new(1.0 - theta * theta / 6.0, -theta / 2.0 + theta.powi(3) / 24.0);
        phase(w * a) * series * len
    } else {
        (phase(w * a) - phase(w * b)) / Complex64::new(0.0, 2.0 * PI * w)
    }
}

/// `1̂_S(w) = ∫_S exp(-2πiwt) dt`.
pub fn indicator_transform(set: &IntervalUnion, w: f64) -> Complex64 {
    set.intervals()
        .iter()
        .map(|iv| {
            let (a, b) = iv.bounds();
            interval_transform(a, b, w)
        })
        .sum()
}

/// `⟨e_λ, e_γ⟩_{L²(S)}`.
pub fn exp_inner_product(set: &IntervalUnion, lambda: f64, gamma: f64) -> Complex64 {
    if lambda == gamma {
        return Complex64::new(set.measure(), 0.0);
    }
    indicator_transform(set, gamma - lambda)
}

/// Matrix `A` with `A[k][j] = ⟨e_{μ_j}, e_{μ_k}⟩`, so that
/// `‖Σ c_j e_{μ_j}‖² = c* A c` and `(A c)_k = ⟨Σ c_j e_{μ_j}, e_{μ_k}⟩`.
pub fn synthesis_gram(set: &IntervalUnion, points: &[f64], exec: Exec) -> CMatrix {
    let n = points.len();
    let measure = set.measure();
    let rows = exec.map_range(n, |k| {
        (0..n)
            .map(|j| {
                if j == k {
                    Complex64::new(measure, 0.0)
                } else {
                    indicator_transform(set, points[k] - points[j])
                }
            })
            .collect::<Vec<_>>()
    });
    CMatrix::from_fn(n, n, |k, j| rows[k][j])
}

/// `h[k] = ⟨e_w, e_{μ_k}⟩`, the analysis coefficients of a pure exponential.
pub fn analysis_vector(set: &IntervalUnion, points: &[f64], w: f64) -> Vec<Complex64> {
    let measure = set.measure();
    points
        .iter()
        .map(|&mu| {
            if mu == w {
                Complex64::new(measure, 0.0)
            } else {
                indicator_transform(set, mu - w)
            }
        })
        .collect()
}

/// Gram matrix of a finite exponential system, `entries[j][k] = ⟨e_{λ_j}, e_{λ_k}⟩`.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    entries: CMatrix,
    set: IntervalUnion,
    frequencies: FrequencySet,
}

impl GramMatrix {
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn set(&self) -> &IntervalUnion {
        &self.set
    }

    pub fn frequencies(&self) -> &FrequencySet {
        &self.frequencies
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// The transpose (equivalently, the conjugate), which acts on coefficient
    /// vectors of synthesized functions; see [`synthesis_gram`].
    pub fn synthesis(&self) -> CMatrix {
        self.entries.transpose()
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        HermitianEigen::new(&self.entries)
    }

    /// Allowed negative eigenvalue magnitude.
    pub fn psd_tolerance(&self) -> f64 {
        PSD_TOLERANCE * self.set.measure() * self.dim() as f64
    }

    /// CSV with one row per matrix row and `re,im` column pairs.
    pub fn to_csv(&self) -> String {
        let n = self.dim();
        let mut out = String::new();
        let header: Vec<String> = (0..n).flat_map(|k| [format!("re_{k}"), format!("im_{k}")]).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for j in 0..n {
            let row: Vec<String> = (0..n)
                .flat_map(|k| {
                    let z = self.entries[(j, k)];
                    [format!("{:e}", z.re), format!("{:e}", z.im)]
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct GramRepr {
    set: IntervalUnion,
    frequencies: FrequencySet,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for GramMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        GramRepr {
            set: self.set.clone(),
            frequencies: self.frequencies.clone(),
            re: (0..n).map(|j| (0..n).map(|k| self.entries[(j, k)].re).collect()).collect(),
            im: (0..n).map(|j| (0..n).map(|k| self.entries[(j, k)].im).collect()).collect(),
        }
        .serialize(serializer)
    }
}

/// Gram matrix of `E(Λ)` in `L²(S)`.
pub fn gram(set: &IntervalUnion, frequencies: &FrequencySet) -> Result<GramMatrix> {
    gram_with(set, frequencies, Exec::default())
}

pub fn gram_with(set: &IntervalUnion, frequencies: &FrequencySet, exec: Exec) -> Result<GramMatrix> {
    if frequencies.is_empty() {
        return Err(Error::EmptyFrequencySet);
    }
    let entries = synthesis_gram(set, frequencies.points(), exec).transpose();
    Ok(GramMatrix {
        entries,
        set: set.clone(),
        frequencies: frequencies.clone(),
    })
}

/// Finite-section Bessel constant: the largest Gram eigenvalue.
pub fn bessel_bound(set: &IntervalUnion, frequencies: &FrequencySet) -> Result<f64> {
    Ok(gram(set, frequencies)?.eigen()?.max())
}

/// `‖Σ a_λ (e_{ρ_λ} - e_λ)‖² / (η² Σ |a_λ|²)` with `η = max |ρ_λ - λ|`,
/// evaluated exactly through the Gram matrix of the combined system.
pub fn stability_ratio(
    set: &IntervalUnion,
    frequencies: &FrequencySet,
    perturbed: &[f64],
    coefficients: &[Complex64],
) -> Result<f64> {
    let n = frequencies.len();
    if n == 0 {
        return Err(Error::EmptyFrequencySet);
    }
    if perturbed.len() != n || coefficients.len() != n {
        return Err(Error::param(
            "perturbed",
            format!(
                "expected {n} perturbed points and coefficients, got {} and {}",
                perturbed.len(),
                coefficients.len()
            ),
        ));
    }
    let coeff_norm_sq: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    if !(coeff_norm_sq > 0.0) {
        return Err(Error::param("coefficients", "must be nonzero"));
    }
    let eta = frequencies
        .points()
        .iter()
        .zip(perturbed)
        .map(|(l, r)| (r - l).abs())
        .fold(0.0, f64::max);
    if eta == 0.0 {
        return Err(Error::ZeroDisplacement);
    }
    let delta = frequencies.separation();
    if eta > delta / 3.0 * (1.0 + 1e-12) {
        return Err(Error::Hypothesis(format!(
            "displacement {eta} exceeds delta/3 = {}",
            delta / 3.0
        )));
    }
    let points: Vec<f64> = perturbed.iter().chain(frequencies.points()).copied().collect();
    let vector: Vec<Complex64> = coefficients.iter().copied().chain(coefficients.iter().map(|c| -c)).collect();
    let a = synthesis_gram(set, &points, Exec::Sequential);
    let v = nalgebra::DVector::from_vec(vector);
    let energy = (v.adjoint() * &a * &v)[(0, 0)].re.max(0.0);
    Ok(energy / (eta * eta * coeff_norm_sq))
}
