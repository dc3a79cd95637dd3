//! Interval-union sets and uniformly discrete frequency sets.

mod frequencies;
mod intervals;

pub use frequencies::{lattice_complement, FrequencySet, Generator};
pub use intervals::{complement_in, parse_rational, Endpoint, Interval, IntervalUnion, MERGE_TOLERANCE};
