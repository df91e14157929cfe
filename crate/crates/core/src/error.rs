use thiserror::Error;

use crate::angle::Angle;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid angle {0}: must be a rational number in [0, 1)")]
    InvalidAngle(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("a system needs at least one finite point")]
    NoPoints,

    #[error("negative multiplicity {value} for nu^{level}_{{1,0}} at {point}")]
    NegativeMultiplicity {
        point: String,
        level: i32,
        value: i64,
    },

    #[error("negative Hodge number h^{level} = {value}")]
    NegativeHodgeNumber { level: i32, value: i64 },

    #[error("negative cohomology dimension {0}")]
    NegativeDimension(i64),

    #[error("convolution parameter must be a nontrivial character")]
    ChiIsOne,

    #[error("monodromy at infinity is not a nontrivial scalar")]
    NotScalarAtInfinity,

    #[error("convolution parameter {given} does not match the scalar {expected} at infinity")]
    ChiMismatch { given: Angle, expected: Angle },

    #[error("operation produces a system of rank zero")]
    ZeroRank,

    #[error("system is not rigid (rigidity index {0})")]
    NotRigid(i64),

    #[error("no allowed rank-one twist: the twisted monodromy at infinity would be trivial")]
    NotAllowed,

    #[error("reduction did not terminate within {0} steps")]
    IterationCapExceeded(usize),

    #[error("Hodge numbers are not multiplicity-free (h^{level} = {value})")]
    NotMultiplicityFree { level: i32, value: u32 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("no trivial rank-one block at level {level} at {point}")]
    MissingTrivialBlock { point: String, level: i32 },

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Internal invariant violations, as opposed to bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_) | Error::IterationCapExceeded(_))
    }
}
