//! Exact builders for the named objects: the two example sequences, the
//! sharpness set with its periodic-truncation approximant, and lattice snapping.

pub(crate) mod sequences;
mod sharpness;
pub(crate) mod snap;

pub use sequences::{example_sequence, NamedSequence};
pub use sharpness::{sharpness_set, truncation_approximant, SharpnessInstance, TruncationApproximant};
pub use snap::{snap_point, snap_to_lattice, SnappedSet};
