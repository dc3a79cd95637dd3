use serde::Serialize;

use super::dense::{hs_norm_sq, CMatrix, Svd};
use crate::error::{Error, Result};

/// Orthonormal basis of a subspace on which `B` is uniformly bounded below.
#[derive(Clone, Debug, Serialize)]
pub struct SubspaceBasis {
    /// `N × m`, orthonormal columns.
    #[serde(skip)]
    pub columns: CMatrix,
    pub gamma: f64,
    pub d: f64,
    pub ambient_dim: usize,
    /// Achieved dimension `m`.
    pub dim: usize,
    /// The guaranteed lower bound `(1 - γ²d²)N - 1`.
    pub dim_bound: f64,
    /// `‖B - I‖²_HS`.
    pub hs_deviation: f64,
    /// Number of singular values of `B - I` above `1/γ`.
    pub discarded: usize,
}

impl SubspaceBasis {
    /// `min ‖B a‖` over unit vectors `a` in the subspace, i.e. the smallest
    /// singular value of `B` restricted to the columns.
    pub fn min_gain(&self, b: &CMatrix) -> Result<f64> {
        if self.dim == 0 {
            return Ok(f64::INFINITY);
        }
        Ok(Svd::new(&(b * &self.columns))?.min())
    }

    /// The guaranteed gain `1 - 1/γ`.
    pub fn gain_bound(&self) -> f64 {
        1.0 - 1.0 / self.gamma
    }

    /// Largest deviation of `Q*Q` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let m = self.columns.ncols();
        (self.columns.adjoint() * &self.columns - CMatrix::identity(m, m))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Given `‖B - I‖²_HS ≤ d²N` and `1 < γ < 1/d`, returns the span of the right
/// singular vectors of `B - I` whose singular values are at most `1/γ`.
///
/// On that span `‖(B - I)a‖ ≤ ‖a‖/γ`, hence `‖Ba‖ ≥ (1 - 1/γ)‖a‖`, and since
/// at most `γ²‖B - I‖²_HS` singular values exceed `1/γ` the dimension is at
/// least `(1 - γ²d²)N`.
pub fn extract_stable_subspace(b: &CMatrix, d: f64, gamma: f64) -> Result<SubspaceBasis> {
    if !b.is_square() || b.nrows() == 0 {
        return Err(Error::param("B", "must be a nonempty square matrix"));
    }
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::param("d", format!("must lie in (0, 1), got {d}")));
    }
    if !(gamma > 1.0 && gamma * d < 1.0) {
        return Err(Error::Hypothesis(format!("gamma = {gamma} must satisfy 1 < gamma < 1/d = {}", 1.0 / d)));
    }
    let n = b.nrows();
    let deviation = b - CMatrix::identity(n, n);
    let hs = hs_norm_sq(&deviation);
    let cap = d * d * n as f64;
    if hs > cap * (1.0 + 1e-12) {
        return Err(Error::Hypothesis(format!(
            "‖B - I‖²_HS = {hs} exceeds d²N = {cap}"
        )));
    }
    let svd = Svd::new(&deviation)?;
    let threshold = 1.0 / gamma;
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] <= threshold)
        .collect();
    let discarded = n - keep.len();
    debug_assert!(
        discarded as f64 <= gamma * gamma * hs + 1e-9,
        "counting bound violated: {discarded} > γ²‖B-I‖² = {}",
        gamma * gamma * hs
    );
    let columns = CMatrix::from_fn(n, keep.len(), |r, c| svd.v[(r, keep[c])]);
    Ok(SubspaceBasis {
        columns,
        gamma,
        d,
        ambient_dim: n,
        dim: keep.len(),
        dim_bound: (1.0 - gamma * gamma * d * d) * n as f64 - 1.0,
        hs_deviation: hs,
        discarded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn identity_keeps_everything() {
        for n in [1, 5, 12] {
            let s = extract_stable_subspace(&CMatrix::identity(n, n), 0.3, 2.0).unwrap();
            assert_eq!(s.dim, n);
            assert!(s.orthonormality_defect() < 1e-12);
            assert!((s.min_gain(&CMatrix::identity(n, n)).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_one_defect() {
        let mut b = CMatrix::identity(4, 4);
        b[(0, 0)] = Complex64::new(0.0, 0.0);
        let s = extract_stable_subspace(&b, 0.5, 1.5).unwrap();
        assert_eq!(s.dim, 3);
        assert!((s.dim_bound - 0.75).abs() < 1e-12);
        // the kept subspace is the orthogonal complement of e_1
        for c in 0..3 {
            assert!(s.columns[(0, c)].norm() < 1e-12);
        }
        assert!((s.min_gain(&b).unwrap() - 1.0).abs() < 1e-12);
        assert!(s.min_gain(&b).unwrap() >= s.gain_bound());
    }

    #[test]
    fn hypotheses_are_checked() {
        let b = CMatrix::identity(3, 3) * Complex64::new(3.0, 0.0);
        assert!(matches!(extract_stable_subspace(&b, 0.5, 1.5), Err(Error::Hypothesis(_))));
        let i = CMatrix::identity(3, 3);
        assert!(matches!(extract_stable_subspace(&i, 0.5, 2.5), Err(Error::Hypothesis(_))));
        assert!(matches!(extract_stable_subspace(&i, 0.5, 1.0), Err(Error::Hypothesis(_))));
        assert!(extract_stable_subspace(&i, 1.5, 1.2).is_err());
    }
}
