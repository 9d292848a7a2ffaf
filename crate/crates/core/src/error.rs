use thiserror::Error;

/// Domain errors raised by the analyses in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed number {0:?}")]
    MalformedNumber(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cone not pointed")]
    NotPointed,
    #[error("cone not proper")]
    ImproperCone,
    #[error("empty point set")]
    EmptySet,
    #[error("point is not a member of the set")]
    NotMember,
    #[error("point is not nondominated")]
    NotNondominated,
    #[error("point is not in the convex hull of the generators")]
    NotInHull,
    #[error("empty objective selector")]
    EmptySelector,
    #[error("objective index {index} out of range for {dim} objectives")]
    SelectorOutOfRange { index: usize, dim: usize },
    #[error("too many objectives: {found} exceeds the cap of {cap}")]
    TooManyObjectives { found: usize, cap: usize },
    #[error("weight vector is zero")]
    ZeroWeights,
    #[error("weight vector has a negative entry")]
    NegativeWeight,
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("no frontier samples")]
    EmptyFrontier,
    #[error("epsilon must be positive")]
    InvalidEpsilon,
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("certificate rejected: {0}")]
    InvalidCertificate(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
