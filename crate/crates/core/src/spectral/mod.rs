//! Dense spectral machinery: eigen/SVD wrappers, the stable-subspace
//! construction, the projection-integral identity and the quadrature behind it.

pub mod dense;
pub mod projection;
pub mod quadrature;
pub mod subspace;

pub use dense::{CMatrix, HermitianEigen, Svd};
pub use projection::{projection_integral, ProjectionIntegral, ProjectionKernel};
pub use subspace::{extract_stable_subspace, SubspaceBasis};
