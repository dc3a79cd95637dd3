use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use super::solver::solve_ball;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fourier::{analysis_vector, synthesis_gram};
use crate::geometry::{FrequencySet, IntervalUnion};
use crate::spectral::dense::{CMatrix, HermitianEigen};

/// Relative eigenvalue floor (times the trace) for pseudo-inversion.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// Coefficients `c` of `g_λ = Σ c_γ e_γ` with `‖g_λ‖ ≤ M` and the smallest
/// achievable `‖ĝ_λ - δ_λ‖_{ℓ²(Λ)}`, where `ĝ_λ(γ) = ⟨g_λ, e_γ⟩`.
#[derive(Clone, Debug, Serialize)]
pub struct MinimalityCertificate {
    pub index: usize,
    pub lambda: f64,
    pub budget: f64,
    pub residual: f64,
    /// `‖g_λ‖_{L²(S)} = √(c* G c)`.
    pub achieved_norm: f64,
    pub multiplier: f64,
    pub budget_active: bool,
    pub kkt_residual: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<Complex64>,
}

/// Coefficients `a_λ(w)` of `p_w = Σ a_λ e_λ` with `Σ|a_λ|² ≤ C` and the
/// smallest achievable `‖e_w - p_w‖_{L²(S)}`.
#[derive(Clone, Debug, Serialize)]
pub struct CompletenessCertificate {
    pub w: f64,
    pub budget: f64,
    pub residual: f64,
    pub coeff_norm_sq: f64,
    pub multiplier: f64,
    pub budget_active: bool,
    pub kkt_residual: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<Complex64>,
}

impl MinimalityCertificate {
    /// Drops the coefficient vector, keeping the scalar summary.
    pub fn without_coefficients(mut self) -> Self {
        self.coefficients = Vec::new();
        self
    }
}

impl CompletenessCertificate {
    pub fn without_coefficients(mut self) -> Self {
        self.coefficients = Vec::new();
        self
    }
}

/// Gram matrix of a finite exponential system, factored once and shared by
/// every certificate on it.
#[derive(Clone, Debug)]
pub struct GramFactorization {
    set: IntervalUnion,
    frequencies: FrequencySet,
    /// `A[k][j] = ⟨e_j, e_k⟩`, acting on coefficient vectors.
    gram: CMatrix,
    eigen: HermitianEigen,
    /// Eigenvalues with everything at or below the floor set to zero.
    sigma: Vec<f64>,
}

impl GramFactorization {
    pub fn new(set: &IntervalUnion, frequencies: &FrequencySet, exec: Exec) -> Result<Self> {
        if frequencies.is_empty() {
            return Err(Error::EmptyFrequencySet);
        }
        let gram = synthesis_gram(set, frequencies.points(), exec);
        let eigen = HermitianEigen::new(&gram)?;
        let floor = EIGEN_FLOOR * set.measure() * frequencies.len() as f64;
        let sigma = eigen.values.iter().map(|&s| if s > floor { s } else { 0.0 }).collect();
        Ok(GramFactorization {
            set: set.clone(),
            frequencies: frequencies.clone(),
            gram,
            eigen,
            sigma,
        })
    }

    pub fn set(&self) -> &IntervalUnion {
        &self.set
    }

    pub fn frequencies(&self) -> &FrequencySet {
        &self.frequencies
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    /// Number of eigenvalues above the floor.
    pub fn rank(&self) -> usize {
        self.sigma.iter().filter(|&&s| s > 0.0).count()
    }

    fn to_eigen(&self, v: &[Complex64]) -> Vec<Complex64> {
        let u = &self.eigen.vectors;
        (0..self.dim())
            .map(|k| u.column(k).iter().zip(v).map(|(a, b)| a.conj() * b).sum())
            .collect()
    }

    fn eigen_to_standard(&self, v: &[Complex64]) -> DVector<Complex64> {
        &self.eigen.vectors * DVector::from_column_slice(v)
    }

    fn index_of(&self, lambda: f64) -> Result<usize> {
        self.frequencies
            .index_of(lambda)
            .ok_or_else(|| Error::param("lambda", format!("{lambda} is not a point of the frequency window")))
    }

    pub fn certify_minimality(&self, lambda: f64, budget: f64) -> Result<MinimalityCertificate> {
        let index = self.index_of(lambda)?;
        Ok(self.minimality_curve(index, &[budget])?.pop().expect("one budget"))
    }

    /// Certificates at every budget for one `λ`, reusing the eigenbasis
    /// coordinates of `δ_λ`. A larger budget never reports a worse residual:
    /// the previous certificate stays feasible and is kept if it is better.
    pub fn minimality_curve(&self, index: usize, budgets: &[f64]) -> Result<Vec<MinimalityCertificate>> {
        check_budgets("M", budgets)?;
        let n = self.dim();
        if index >= n {
            return Err(Error::param("lambda", format!("index {index} out of range for {n} frequencies")));
        }
        // z = U* δ_λ
        let z: Vec<Complex64> = (0..n).map(|k| self.eigen.vectors[(index, k)].conj()).collect();
        let b: Vec<Complex64> = z.iter().zip(&self.sigma).map(|(zk, s)| zk * s.sqrt()).collect();
        let mut out: Vec<MinimalityCertificate> = Vec::with_capacity(budgets.len());
        for &m in budgets {
            let sol = solve_ball(&self.sigma, &b, m * m);
            let u: Vec<Complex64> = sol
                .y
                .iter()
                .zip(&self.sigma)
                .map(|(y, &s)| if s > 0.0 { y / s.sqrt() } else { Complex64::new(0.0, 0.0) })
                .collect();
            let c = self.eigen_to_standard(&u);
            let ac = &self.gram * &c;
            let mut diff = ac.clone();
            diff[index] -= Complex64::new(1.0, 0.0);
            let grad = &self.gram * &diff + &ac * Complex64::new(sol.multiplier, 0.0);
            let cert = MinimalityCertificate {
                index,
                lambda: self.frequencies.points()[index],
                budget: m,
                residual: diff.norm(),
                achieved_norm: c.dotc(&ac).re.max(0.0).sqrt(),
                multiplier: sol.multiplier,
                budget_active: sol.active,
                kkt_residual: grad.norm(),
                coefficients: c.iter().copied().collect(),
            };
            match out.last() {
                Some(prev) if prev.residual < cert.residual => {
                    let mut kept = prev.clone();
                    kept.budget = m;
                    out.push(kept);
                }
                _ => out.push(cert),
            }
        }
        Ok(out)
    }

    pub fn certify_completeness(&self, w: f64, budget: f64) -> Result<CompletenessCertificate> {
        Ok(self.completeness_curve(w, &[budget])?.pop().expect("one budget"))
    }

    /// Certificates at every budget for one `w`.
    pub fn completeness_curve(&self, w: f64, budgets: &[f64]) -> Result<Vec<CompletenessCertificate>> {
        check_budgets("C", budgets)?;
        let h = analysis_vector(&self.set, self.frequencies.points(), w);
        let b = self.to_eigen(&h);
        let h = DVector::from_vec(h);
        let measure = self.set.measure();
        let mut out: Vec<CompletenessCertificate> = Vec::with_capacity(budgets.len());
        for &budget in budgets {
            let sol = solve_ball(&self.sigma, &b, budget);
            let a = self.eigen_to_standard(&sol.y);
            let aa = &self.gram * &a;
            let residual_sq = measure - 2.0 * a.dotc(&h).re + a.dotc(&aa).re;
            let grad = &aa + &a * Complex64::new(sol.multiplier, 0.0) - &h;
            let cert = CompletenessCertificate {
                w,
                budget,
                residual: residual_sq.max(0.0).sqrt(),
                coeff_norm_sq: a.norm_squared(),
                multiplier: sol.multiplier,
                budget_active: sol.active,
                kkt_residual: grad.norm(),
                coefficients: a.iter().copied().collect(),
            };
            match out.last() {
                Some(prev) if prev.residual < cert.residual => {
                    let mut kept = prev.clone();
                    kept.budget = budget;
                    out.push(kept);
                }
                _ => out.push(cert),
            }
        }
        Ok(out)
    }
}

fn check_budgets(name: &'static str, budgets: &[f64]) -> Result<()> {
    if budgets.is_empty() {
        return Err(Error::param(name, "budget grid is empty"));
    }
    if budgets.iter().any(|&b| !(b > 0.0 && b.is_finite())) {
        return Err(Error::param(name, "budgets must be positive and finite"));
    }
    if budgets.windows(2).any(|p| p[1] < p[0]) {
        return Err(Error::param(name, "budgets must be ascending"));
    }
    Ok(())
}

/// Best `g_λ` with `‖g_λ‖ ≤ M`, over the span of the system.
pub fn certify_minimality(
    set: &IntervalUnion,
    frequencies: &FrequencySet,
    lambda: f64,
    budget: f64,
) -> Result<MinimalityCertificate> {
    if !(budget > 0.0) {
        return Err(Error::param("M", format!("must be positive, got {budget}")));
    }
    GramFactorization::new(set, frequencies, Exec::Sequential)?.certify_minimality(lambda, budget)
}

/// Best `p_w` with `Σ|a_λ|² ≤ C`.
pub fn certify_completeness(
    set: &IntervalUnion,
    frequencies: &FrequencySet,
    w: f64,
    budget: f64,
) -> Result<CompletenessCertificate> {
    if !(budget > 0.0) {
        return Err(Error::param("C", format!("must be positive, got {budget}")));
    }
    GramFactorization::new(set, frequencies, Exec::Sequential)?.certify_completeness(w, budget)
}
