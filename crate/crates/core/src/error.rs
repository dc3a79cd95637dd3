use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid interval [{left}, {right}]: left endpoint must be strictly below right")]
    InvalidInterval { left: f64, right: f64 },

    #[error("result has zero measure")]
    ZeroMeasure,

    #[error("set is not contained in the ambient set: interval [{left}, {right}] sticks out")]
    NotContained { left: f64, right: f64 },

    #[error("frequencies {a} and {b} are closer than the separation {separation}")]
    NotSeparated { a: f64, b: f64, separation: f64 },

    #[error("frequency {point} does not lie on the lattice {step}Z")]
    OffLattice { point: f64, step: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("zero displacement")]
    ZeroDisplacement,

    #[error("frequency set is empty")]
    EmptyFrequencySet,

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}
