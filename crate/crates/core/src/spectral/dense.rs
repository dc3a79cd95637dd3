//! Dense Hermitian eigendecomposition and SVD, backed by nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// `A = V diag(values) V*` with eigenvalues in ascending order.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(matrix: &CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Numerical(format!(
                "eigendecomposition of a non-square {}x{} matrix",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n = matrix.nrows();
        if n == 0 {
            return Ok(HermitianEigen {
                values: Vec::new(),
                vectors: CMatrix::zeros(0, 0),
            });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("matrix has non-finite entries".into()));
        }
        // Symmetrize so that rounding in the caller cannot leak into the solver.
        let sym = (matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 0)
            .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(HermitianEigen { values, vectors })
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// Extreme eigenvalues only.
pub fn eigen_range(matrix: &CMatrix) -> Result<(f64, f64)> {
    let e = HermitianEigen::new(matrix)?;
    Ok((e.min(), e.max()))
}

/// `M = U diag(σ) V*` with singular values in descending order; `v` holds the
/// right singular vectors as columns.
#[derive(Clone, Debug)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: CMatrix,
    pub v: CMatrix,
}

impl Svd {
    pub fn new(matrix: &CMatrix) -> Result<Self> {
        let (m, n) = matrix.shape();
        if m == 0 || n == 0 {
            return Ok(Svd {
                singular_values: Vec::new(),
                u: CMatrix::zeros(m, 0),
                v: CMatrix::zeros(n, 0),
            });
        }
        let svd = nalgebra::SVD::try_new(matrix.clone(), true, true, f64::EPSILON, 0)
            .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
        let u = svd.u.ok_or_else(|| Error::Numerical("SVD returned no U".into()))?;
        let v_t = svd.v_t.ok_or_else(|| Error::Numerical("SVD returned no V".into()))?;
        let k = svd.singular_values.len();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let singular_values = order.iter().map(|&i| svd.singular_values[i]).collect();
        let u = CMatrix::from_fn(m, k, |r, c| u[(r, order[c])]);
        let v = CMatrix::from_fn(n, k, |r, c| v_t[(order[c], r)].conj());
        Ok(Svd { singular_values, u, v })
    }

    pub fn min(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }
}

pub fn hs_norm_sq(matrix: &CMatrix) -> f64 {
    matrix.iter().map(|z| z.norm_sqr()).sum()
}
