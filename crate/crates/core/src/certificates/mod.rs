//! Constrained least-squares certificates of approximate uniform minimality
//! and approximate uniform completeness, and their budget/residual curves.

mod certify;
mod solver;
mod tradeoff;

pub use certify::{
    certify_completeness, certify_minimality, CompletenessCertificate, GramFactorization, MinimalityCertificate,
    EIGEN_FLOOR,
};
pub use solver::BUDGET_TOLERANCE;
pub use tradeoff::{
    completeness_tradeoff, minimality_tradeoff, CertificateKind, TradeoffCurve, TradeoffPoint, WGrid, DEFAULT_PER_UNIT,
    DEFAULT_RADII, GOLDEN_OFFSET,
};
