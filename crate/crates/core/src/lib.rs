//! Numerical laboratory for exponential systems `E(Λ) = {e^{2πiλt}}` on
//! finite unions of intervals.
//!
//! Gram matrices come from the closed-form Fourier transform of an interval
//! indicator, so every certificate is exact up to floating point and a final
//! eigendecomposition. The data-parallel sweeps run on rayon by default; the
//! `parallel` feature can be switched off for a purely sequential build, and
//! [`Exec`] selects the policy per call.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificates;
pub mod constructions;
pub mod density;
pub mod duality;
mod error;
pub mod exec;
pub mod fourier;
pub mod geometry;
pub mod spectral;

pub use error::{Error, Result};
pub use exec::Exec;
pub use geometry::{FrequencySet, Generator, IntervalUnion};
